// Copyright 2026 The dqbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dqbench/episode.h"

#include <cmath>
#include <numbers>

#include "json.hpp"

#include "dqbench/errors.h"
#include "dqbench/rewards.h"
#include "dqbench/seed.h"
#include "dqbench/teacher.h"

namespace dqbench {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
// A misaligned close this close to the object surface pushes it.
constexpr double kContactMargin = 0.02;

Json pose_json(const Pose6& p) {
  return Json::array({p.position.x(), p.position.y(), p.position.z(),
                      p.orientation.x(), p.orientation.y(),
                      p.orientation.z()});
}

CameraModel configured(CameraModel cam, const HarnessConfig& cfg) {
  cam.hfov = cfg.camera_hfov_deg * kPi / 180.0;
  if (cam.mount == CameraMount::kBase) {
    cam.mount_offset.orientation.y() = cfg.base_camera_pitch_deg * kPi / 180.0;
  }
  return cam;
}

RewardPhase reward_phase(Phase p) {
  switch (p) {
    case Phase::kGrasped: return RewardPhase::kGrasped;
    case Phase::kLifted:
    case Phase::kSuccess: return RewardPhase::kLifted;
    default: return RewardPhase::kApproaching;
  }
}

Vec3 unit_or(const Vec3& v, const Vec3& fallback) {
  double n = v.norm();
  return n > 1e-9 ? Vec3(v / n) : fallback;
}

double step_reward(const SceneState& scene, const RobotState& robot,
                   const RobotState& prev, const Vec12& q_dot_prev,
                   const Vec8& a_prev, const HighLevelAction& action,
                   const EpisodeStatus& status, const HarnessConfig& cfg) {
  HighLevelRewardInput in;
  in.phase = reward_phase(status.phase);
  in.dist_ee_obj = (robot.ee_pose.position - scene.object_pose.position).norm();
  in.lift_height =
      status.phase == Phase::kApproaching ? 0.0 : std::max(0.0, lift_height(scene));
  in.completed = status.phase == Phase::kSuccess;
  in.q_dot_prev = q_dot_prev;
  in.q_dot = (robot.joint_proxy - prev.joint_proxy) / cfg.decision_dt;
  in.a_prev = a_prev;
  in.a = action.as_vector();
  in.v_x_star = action.v_lin;
  const Mat3 base_rot = euler_to_rotation(robot.base_pose.orientation);
  const Vec3 heading = base_rot.col(0);
  in.d_obj = unit_or(scene.object_pose.position - robot.ee_pose.position, heading);
  in.d_ee = euler_to_rotation(robot.ee_pose.orientation).col(0);
  in.d_base = heading;
  Vec3 rel = scene.object_pose.position - robot.base_pose.position;
  rel.z() = 0.0;
  in.x_obj = rel.dot(heading);
  in.x_base = 0.0;
  in.H_c = robot.base_pose.position.z() -
           scene.terrain->height(robot.base_pose.position.x(),
                                 robot.base_pose.position.y());
  in.H_t = kNominalBaseHeight;
  in.psi_c = robot.base_pose.orientation.z();
  in.psi_0 = robot.yaw_ref;
  HighLevelRewardParams params;
  params.standoff = cfg.teacher.standoff;
  return high_level_reward(in, params).total;
}

std::string category_name(const ObjectSpec& spec) {
  return std::string(to_string(spec.category));
}

}  // namespace

ObjectGrasps prepare_grasps(const ObjectSpec& spec, int candidate_count,
                            int bank_size) {
  ObjectGrasps g;
  g.candidates =
      generate_candidates(spec, candidate_count, candidate_seed(spec));
  g.bank = build_memory(spec.id, g.candidates, bank_size);
  g.feature = object_feature(spec);
  return g;
}

Environment Environment::from_config(const HarnessConfig& config) {
  config.validate();
  Environment env;
  env.config = config;
  env.catalog =
      config.catalog.empty() ? default_catalog() : load_catalog(config.catalog);
  env.gfm = config.gfm_weights.empty()
                ? GfmWeights::alignment()
                : GfmWeights::from_store(nn::WeightStore::load(config.gfm_weights));
  for (const ObjectSpec& spec : env.catalog) {
    env.grasps.emplace(spec.id, prepare_grasps(spec, config.candidate_count,
                                               config.bank_size));
  }
  return env;
}

EpisodeConfig Environment::episode(int level, const std::string& object_id,
                                   uint64_t seed) const {
  EpisodeConfig c;
  c.level = level;
  c.object_id = object_id;
  c.seed = seed;
  c.physics_dt = config.physics_dt;
  c.decision_dt = config.decision_dt;
  c.timeout_steps = config.timeout_steps;
  return c;
}

std::string EpisodeLog::to_json() const {
  Json j;
  j["level"] = config.level;
  j["object"] = config.object_id;
  j["seed"] = config.seed;
  j["split"] = split;
  j["category"] = category;
  j["physics_dt"] = config.physics_dt;
  j["decision_dt"] = config.decision_dt;
  j["timeout_steps"] = config.timeout_steps;
  j["outcome"] = std::string(to_string(outcome.phase));
  j["attempts"] = outcome.attempt_count;
  j["success_step"] =
      outcome.success_step ? Json(*outcome.success_step) : Json(nullptr);
  Json closes = Json::array();
  for (const CloseEvent& c : close_events) {
    closes.push_back(Json::array({c.step, c.success}));
  }
  j["close_events"] = std::move(closes);
  Json steps_json = Json::array();
  for (const StepRecord& r : steps) {
    Json s;
    s["step"] = r.step;
    s["platform"] = pose_json(r.platform_pose);
    s["object"] = pose_json(r.object_pose);
    s["attached"] = std::string(to_string(r.attached_to));
    s["base"] = pose_json(r.base_pose);
    s["ee"] = pose_json(r.ee_pose);
    s["gripper_closed"] = r.gripper_closed;
    s["action"] = Json(std::vector<double>(r.action.data(), r.action.data() + 8));
    s["close"] = r.gripper_close;
    s["reward"] = r.reward;
    s["phase"] = std::string(to_string(r.phase));
    steps_json.push_back(std::move(s));
  }
  j["steps"] = std::move(steps_json);
  return j.dump();
}

EpisodeLog run_episode(const EpisodeConfig& config, const Environment& env,
                       const StepObserver& observer) {
  EpisodeLog log;
  log.config = config;
  int step = 0;
  try {
    const HarnessConfig& cfg = env.config;
    SceneState scene = reset_episode(config, env.catalog);
    const PlatformTrajectory traj = trajectory_for(config);
    RobotState robot = make_robot(*scene.terrain, 0.0, 0.0, 0.0);
    log.split = std::string(to_string(scene.object.split));
    log.category = category_name(scene.object);

    ObjectGrasps local;
    const ObjectGrasps* grasps = nullptr;
    if (auto it = env.grasps.find(scene.object.id); it != env.grasps.end()) {
      grasps = &it->second;
    } else {
      local = prepare_grasps(scene.object, cfg.candidate_count, cfg.bank_size);
      grasps = &local;
    }
    TeacherConfig teacher = cfg.teacher;
    teacher.decision_dt = config.decision_dt;

    const CameraModel wrist_cam = configured(default_wrist_camera(), cfg);
    const CameraModel base_cam = configured(default_base_camera(), cfg);
    LatencyBuffer wrist_delay, base_delay;
    ObsHistory wrist_hist, base_hist;
    const bool render = cfg.render || static_cast<bool>(observer);

    EpisodeStatus status;
    Vec12 q_dot_prev = Vec12::Zero();
    Vec8 a_prev = Vec8::Zero();
    const int substeps = config.physics_steps_per_decision();
    int grasp_close = -1;  // index of the close that attached the object

    while (!is_terminal(status.phase)) {
      ++step;
      if (render) {
        RenderOptions opts{cfg.mask_flip_prob,
                           splitmix64(config.seed ^ static_cast<uint64_t>(step))};
        wrist_hist.push(wrist_delay.push_and_fetch(
            render_frame(scene, robot, wrist_cam, opts)));
        base_hist.push(base_delay.push_and_fetch(
            render_frame(scene, robot, base_cam, opts)));
      }

      TeacherPlan plan = plan_teacher(scene, robot, grasps->bank,
                                      grasps->feature, env.gfm, teacher);
      const HighLevelAction& action = plan.action;

      if (observer) {
        nn::Tensor obs = stack_observation(wrist_hist, base_hist);
        std::vector<float> proprio = proprio_vector(robot);
        observer(StepObservation{step, obs, proprio, action});
      }

      StatusEvent event;
      event.decision_step = step;
      if (action.gripper_close && robot.gripper == Gripper::kOpen) {
        robot.gripper = Gripper::kClosed;
        event.close_event = true;
        event.close_aligned =
            matches_candidate(robot.ee_pose, scene.object_pose,
                              grasps->candidates, teacher.align_pos_tol,
                              teacher.align_ori_tol);
        log.close_events.push_back({step, false});
        if (event.close_aligned) {
          scene = attach_to_gripper(scene, robot.ee_pose);
          grasp_close = static_cast<int>(log.close_events.size()) - 1;
        } else if ((robot.ee_pose.position - scene.object_pose.position).norm() <=
                   bounding_radius(scene.object) + kContactMargin) {
          scene = knock_object(
              scene, euler_to_rotation(robot.ee_pose.orientation).col(0));
        }
      } else if (!action.gripper_close && robot.gripper == Gripper::kClosed) {
        robot.gripper = Gripper::kOpen;
        if (scene.attached_to == Attachment::kGripper) {
          scene.attached_to = Attachment::kFree;
        }
      }

      const RobotState before = robot;
      const CommandVector u = accumulate_command(robot, action);
      for (int k = 0; k < substeps; ++k) {
        robot = execute_command(robot, u, *scene.terrain, config.physics_dt);
        scene = step_scene(scene, traj, config.physics_dt, robot.ee_pose);
        event.end_of_decision = k + 1 == substeps;
        status = check_status(scene, robot, status, config, event);
        event.close_event = false;
        if (is_terminal(status.phase)) break;
      }

      StepRecord rec;
      rec.step = step;
      rec.platform_pose = scene.platform_pose;
      rec.object_pose = scene.object_pose;
      rec.attached_to = scene.attached_to;
      rec.base_pose = robot.base_pose;
      rec.ee_pose = robot.ee_pose;
      rec.gripper_closed = robot.gripper == Gripper::kClosed;
      rec.action = action.as_vector();
      rec.gripper_close = action.gripper_close;
      rec.reward = step_reward(scene, robot, before, q_dot_prev, a_prev, action,
                               status, cfg);
      rec.phase = status.phase;
      log.steps.push_back(rec);

      q_dot_prev = (robot.joint_proxy - before.joint_proxy) / config.decision_dt;
      a_prev = action.as_vector();
    }
    log.outcome = status;
    if (status.phase == Phase::kSuccess && grasp_close >= 0) {
      log.close_events[grasp_close].success = true;
    }
  } catch (const EpisodeError&) {
    throw;
  } catch (const Error& e) {
    throw EpisodeError("episode level=" + std::to_string(config.level) +
                       " object=" + config.object_id +
                       " seed=" + std::to_string(config.seed) +
                       " step=" + std::to_string(step) + ": " + e.code() +
                       ": " + e.what());
  }
  return log;
}

}  // namespace dqbench
