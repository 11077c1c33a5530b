#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "idtrack/geometry.hpp"
#include "idtrack/trackmodel.hpp"

namespace idtrack {

// Which dead id a birth recycles once K_max ids have been issued.
enum class IdReuse { kLongestDead, kMostRecentlyDead };

struct TrackerConfig {
  std::optional<std::size_t> k_max;  // nullopt: unbounded
  std::size_t max_active = 1;
  double assoc_gate = deg2rad(15.0);
  std::size_t birth_frames = 3;
  std::size_t death_frames = 10;
  std::size_t n_particles = 100;
  double process_noise_sigma = deg2rad(1.5);  // per frame
  double obs_sigma = deg2rad(3.0);            // sets the likelihood concentration
  IdReuse id_reuse = IdReuse::kMostRecentlyDead;
  // A confirmed candidate may take the slot of a track that has missed at least
  // birth_frames frames when max_active tracks are live.
  bool displace_silent = true;
  // A live track keeps being reported at its estimate for up to this many consecutive misses.
  std::size_t hold_frames = 1;
  std::uint64_t seed = 0;

  void validate() const;  // InvalidConfig
};

// Groups tagged observations by their source; clutter is dropped. Prediction ids are
// "p_" + ground-truth id. Throws MissingTags on an untagged observation set.
TrackSet oracle_tracker(const ObservationSet& obs);

// White-box adversaries used to calibrate the metrics.
// Relabels each gt track's active frames into k consecutive spans of equal length
// (ids "<gt>#0" .. "<gt>#k-1"). Throws InvalidK when k is 0 or exceeds a track's
// active frame count.
TrackSet splitter_tracker(const TrackSet& gt, std::size_t k);
// Every gt track reported under the single id "merged". Where several gts are active
// in the same frame only the lowest gt id is kept.
TrackSet merger_tracker(const TrackSet& gt);
// Ids "p_" + gt id, except that the labels of the first two gt tracks (by id) are
// exchanged during every odd period of length period_s.
TrackSet swapper_tracker(const TrackSet& gt, double period_s);

// Online particle-filter tracker. Per frame: gated greedy nearest-neighbour
// association, particle update of associated tracks, candidate births after
// birth_frames consecutive supports, deaths after death_frames misses, and a
// K_max id budget that recycles a dead id (see IdReuse) once exhausted.
class ParticleFilterTracker {
public:
  ParticleFilterTracker(const TrackerConfig& cfg);

  // Processes the next frame and returns the confirmed tracks reported in it.
  std::vector<TrackEntry> step(std::span<const Observation> frame);

  std::size_t ids_issued() const noexcept { return issued_; }
  std::size_t live_tracks() const noexcept { return live_.size(); }

private:
  struct Track {
    TrackId id;
    std::vector<Eigen::Vector3d> particles;
    std::vector<double> weights;
    Eigen::Vector3d estimate;
    std::size_t misses = 0;
  };
  struct Candidate {
    Eigen::Vector3d last;
    std::size_t support = 0;
  };

  Track spawn(const TrackId& id, const Eigen::Vector3d& at);
  void predict(Track& t);
  void update(Track& t, const Eigen::Vector3d& z);
  std::optional<TrackId> allocate_id();

  TrackerConfig cfg_;
  Rng rng_;
  double kappa_;
  std::size_t frame_ = 0;
  std::size_t issued_ = 0;
  std::vector<Track> live_;
  std::vector<Candidate> candidates_;
  std::map<TrackId, std::size_t> dead_;  // id -> frame of death
};

TrackSet pf_tracker(const ObservationSet& obs, const TrackerConfig& cfg);

}  // namespace idtrack
