#include "idtrack/trackers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "idtrack/errors.hpp"

namespace idtrack {

void TrackerConfig::validate() const {
  if (max_active < 1) throw InvalidConfig("max_active must be >= 1");
  if (k_max && *k_max < max_active) throw InvalidConfig("k_max must be >= max_active");
  if (!(assoc_gate > 0.0 && assoc_gate <= kPi)) throw InvalidConfig("assoc_gate must be in (0, 180] deg");
  if (birth_frames < 1) throw InvalidConfig("birth_frames must be >= 1");
  if (death_frames < 1) throw InvalidConfig("death_frames must be >= 1");
  if (n_particles < 1) throw InvalidConfig("n_particles must be >= 1");
  if (!(process_noise_sigma >= 0.0)) throw InvalidConfig("process_noise_sigma must be >= 0");
  if (!(obs_sigma > 0.0)) throw InvalidConfig("obs_sigma must be > 0");
}

// ---------------------------------------------------------------------------
// Oracle and adversaries

TrackSet oracle_tracker(const ObservationSet& obs) {
  if (!obs.tagged) throw MissingTags("oracle tracker needs observations tagged with their source id");
  TrackSet out(obs.grid);
  for (std::size_t f = 0; f < obs.frames.size(); ++f)
    for (const auto& o : obs.frames[f])
      if (o.source) out.add("p_" + *o.source, f, o.direction);
  return out;
}

TrackSet splitter_tracker(const TrackSet& gt, std::size_t k) {
  if (k == 0) throw InvalidK("k must be >= 1");
  TrackSet out(gt.grid());
  for (const auto& [id, traj] : gt.tracks()) {
    const std::size_t n = traj.size();
    if (k > n)
      throw InvalidK("k=" + std::to_string(k) + " exceeds the " + std::to_string(n) + " active frames of '" + id + "'");
    std::size_t rank = 0;
    for (const auto& [f, dir] : traj) {
      const std::size_t span = rank * k / n;
      out.add(id + "#" + std::to_string(span), f, dir);
      ++rank;
    }
  }
  return out;
}

TrackSet merger_tracker(const TrackSet& gt) {
  TrackSet out(gt.grid());
  const auto frames = gt.by_frame();
  for (std::size_t f = 0; f < frames.size(); ++f)
    if (!frames[f].empty()) out.add("merged", f, frames[f].front().direction);
  return out;
}

TrackSet swapper_tracker(const TrackSet& gt, double period_s) {
  if (!(period_s > 0.0)) throw InvalidConfig("swap period must be positive");
  const auto ids = gt.track_ids();
  if (ids.size() < 2) throw InvalidConfig("swapper needs at least two ground-truth tracks");
  const auto period =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(period_s / gt.grid().frame_period)));
  TrackSet out(gt.grid());
  for (const auto& [id, traj] : gt.tracks()) {
    for (const auto& [f, dir] : traj) {
      TrackId label = id;
      if ((f / period) % 2 == 1) {
        if (id == ids[0]) label = ids[1];
        else if (id == ids[1]) label = ids[0];
      }
      out.add("p_" + label, f, dir);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Particle filter

ParticleFilterTracker::ParticleFilterTracker(const TrackerConfig& cfg)
    : cfg_(cfg), rng_(cfg.seed), kappa_(1.0 / (cfg.obs_sigma * cfg.obs_sigma)) {
  cfg_.validate();
}

ParticleFilterTracker::Track ParticleFilterTracker::spawn(const TrackId& id, const Eigen::Vector3d& at) {
  Track t{id, {}, {}, at, 0};
  t.particles.reserve(cfg_.n_particles);
  for (std::size_t i = 0; i < cfg_.n_particles; ++i) t.particles.push_back(perturb(at, cfg_.obs_sigma, rng_));
  t.weights.assign(cfg_.n_particles, 1.0 / static_cast<double>(cfg_.n_particles));
  return t;
}

void ParticleFilterTracker::predict(Track& t) {
  for (auto& p : t.particles) p = perturb(p, cfg_.process_noise_sigma, rng_);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < t.particles.size(); ++i) mean += t.weights[i] * t.particles[i];
  if (mean.norm() > 1e-12) t.estimate = mean.normalized();
}

void ParticleFilterTracker::update(Track& t, const Eigen::Vector3d& z) {
  double total = 0.0;
  for (std::size_t i = 0; i < t.particles.size(); ++i) {
    t.weights[i] *= std::exp(kappa_ * (t.particles[i].dot(z) - 1.0));
    total += t.weights[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    // Every particle is too far from the observation to carry weight: restart the cloud.
    t = spawn(t.id, z);
    return;
  }
  for (auto& w : t.weights) w /= total;

  // Systematic resampling.
  const std::size_t n = t.particles.size();
  const double step = 1.0 / static_cast<double>(n);
  double u = std::uniform_real_distribution<double>(0.0, step)(rng_);
  std::vector<Eigen::Vector3d> resampled;
  resampled.reserve(n);
  double cumulative = t.weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (u > cumulative && j + 1 < n) cumulative += t.weights[++j];
    resampled.push_back(t.particles[j]);
    u += step;
  }
  t.particles = std::move(resampled);
  std::fill(t.weights.begin(), t.weights.end(), step);

  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : t.particles) mean += p;
  t.estimate = mean.norm() > 1e-12 ? Eigen::Vector3d(mean.normalized()) : z;
}

std::optional<TrackId> ParticleFilterTracker::allocate_id() {
  if (!cfg_.k_max || issued_ < *cfg_.k_max) return "t" + std::to_string(issued_++);
  if (dead_.empty()) return std::nullopt;
  auto pick = dead_.begin();
  for (auto it = dead_.begin(); it != dead_.end(); ++it) {
    const bool better = cfg_.id_reuse == IdReuse::kLongestDead ? it->second < pick->second : it->second > pick->second;
    if (better) pick = it;
  }
  TrackId id = pick->first;
  dead_.erase(pick);
  return id;
}

std::vector<TrackEntry> ParticleFilterTracker::step(std::span<const Observation> frame) {
  std::vector<Eigen::Vector3d> z;
  z.reserve(frame.size());
  for (const auto& o : frame) z.push_back(o.direction.unit_vector());

  for (auto& t : live_) predict(t);

  // Greedy nearest-neighbour association within the gate.
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < live_.size(); ++i)
    for (std::size_t k = 0; k < z.size(); ++k) {
      const double d = angular_distance(live_[i].estimate, z[k]);
      if (d <= cfg_.assoc_gate) pairs.emplace_back(d, i, k);
    }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> track_obs(live_.size(), -1);
  std::vector<char> obs_used(z.size(), 0);
  for (const auto& [d, i, k] : pairs) {
    if (track_obs[i] >= 0 || obs_used[k]) continue;
    track_obs[i] = static_cast<int>(k);
    obs_used[k] = 1;
  }

  std::vector<char> reported;
  std::vector<Track> survivors;
  survivors.reserve(live_.size());
  for (std::size_t i = 0; i < live_.size(); ++i) {
    Track& t = live_[i];
    if (track_obs[i] >= 0) {
      update(t, z[static_cast<std::size_t>(track_obs[i])]);
      t.misses = 0;
    } else if (++t.misses >= cfg_.death_frames) {
      dead_[t.id] = frame_;
      continue;
    }
    reported.push_back(t.misses <= cfg_.hold_frames ? 1 : 0);
    survivors.push_back(std::move(t));
  }
  live_ = std::move(survivors);

  // Unassociated observations extend candidates (greedy, within the gate) or start new ones.
  std::vector<std::tuple<double, std::size_t, std::size_t>> cand_pairs;
  for (std::size_t c = 0; c < candidates_.size(); ++c)
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (obs_used[k]) continue;
      const double d = angular_distance(candidates_[c].last, z[k]);
      if (d <= cfg_.assoc_gate) cand_pairs.emplace_back(d, c, k);
    }
  std::sort(cand_pairs.begin(), cand_pairs.end());
  std::vector<Candidate> next;
  std::vector<char> cand_used(candidates_.size(), 0);
  for (const auto& [d, c, k] : cand_pairs) {
    if (cand_used[c] || obs_used[k]) continue;
    cand_used[c] = 1;
    obs_used[k] = 1;
    next.push_back({z[k], candidates_[c].support + 1});
  }
  for (std::size_t k = 0; k < z.size(); ++k)
    if (!obs_used[k]) next.push_back({z[k], 1});

  // Births. Candidates beyond the active-track cap stay pending.
  candidates_.clear();
  for (auto& c : next) {
    if (c.support >= cfg_.birth_frames && live_.size() >= cfg_.max_active && cfg_.displace_silent) {
      std::size_t victim = live_.size();
      for (std::size_t i = 0; i < live_.size(); ++i)
        if (live_[i].misses >= cfg_.birth_frames && (victim == live_.size() || live_[i].misses > live_[victim].misses))
          victim = i;
      if (victim < live_.size()) {
        dead_[live_[victim].id] = frame_;
        live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(victim));
        reported.erase(reported.begin() + static_cast<std::ptrdiff_t>(victim));
      }
    }
    if (c.support >= cfg_.birth_frames && live_.size() < cfg_.max_active) {
      if (auto id = allocate_id()) {
        live_.push_back(spawn(*id, c.last));
        reported.push_back(1);
        continue;
      }
    }
    candidates_.push_back(c);
  }

  std::vector<TrackEntry> out;
  for (std::size_t i = 0; i < live_.size(); ++i)
    if (reported[i]) out.push_back({live_[i].id, Direction::from_unit_vector(live_[i].estimate)});
  ++frame_;
  return out;
}

TrackSet pf_tracker(const ObservationSet& obs, const TrackerConfig& cfg) {
  ParticleFilterTracker tracker(cfg);
  TrackSet out(obs.grid);
  for (std::size_t f = 0; f < obs.frames.size(); ++f)
    for (const auto& e : tracker.step(obs.frames[f])) out.add(e.id, f, e.direction);
  return out;
}

}  // namespace idtrack
