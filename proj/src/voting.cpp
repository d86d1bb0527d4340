// Copyright 2026 The rotvote Authors.
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


#include "rotvote/voting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "rotvote/closed_form.hpp"
#include "rotvote/error.hpp"
#include "rotvote/quat_circle.hpp"

namespace rotvote {

void VotingConfig::Validate() const {
  std::ostringstream os;
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    os << "epsilon must lie in (0, 0.5], got " << epsilon;
  } else if (samples < 8) {
    os << "samples per circle must be >= 8, got " << samples;
  } else if (!(tau_ref > 0.0)) {
    os << "tau_ref must be positive, got " << tau_ref;
  } else if (peaks.max_peaks < 1) {
    os << "max_peaks must be >= 1";
  } else if (!(peaks.min_votes_fraction >= 0.0 &&
               peaks.min_votes_fraction <= 1.0)) {
    os << "min_votes_fraction must lie in [0, 1], got "
       << peaks.min_votes_fraction;
  } else if (peaks.suppression_radius_bins < 0) {
    os << "suppression radius must be >= 0";
  } else if (threads < 1) {
    os << "threads must be >= 1, got " << threads;
  } else if (!(duplicate_angle_deg >= 0.0)) {
    os << "duplicate angle must be >= 0";
  } else {
    Accumulator3D::BinsForStep(epsilon);
    return;
  }
  throw Error(ErrorKind::kConfig, os.str());
}

namespace {

struct SampleTable {
  std::vector<double> c;
  std::vector<double> s;

  explicit SampleTable(int samples) : c(samples), s(samples) {
    for (int j = 0; j < samples; ++j) {
      const double alpha = -std::numbers::pi + 2.0 * std::numbers::pi * j / samples;
      c[j] = std::cos(0.5 * alpha);
      s[j] = std::sin(0.5 * alpha);
    }
  }
};

// Calls sink(bin) for each bin the circle of `corr` votes for.
template <typename Sink>
void EmitCircle(const Correspondence& corr, const Accumulator3D& grid,
                const SampleTable& table, DedupMode mode,
                std::vector<std::uint64_t>& scratch, Sink&& sink) {
  const CircleBasis basis = ComputeCircleBasis(corr.x, corr.y);
  scratch.clear();
  std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
  const auto n = static_cast<int>(table.c.size());
  for (int j = 0; j < n; ++j) {
    Vec4 q = basis.b1 * table.c[j] + basis.b2 * table.s[j];
    q = CanonicalizeHemisphere(q);
    const double denom = 1.0 - q[3];
    const Vec3 p(q[0] / denom, q[1] / denom, q[2] / denom);
    const std::uint64_t bin = grid.BinOf(p);
    if (bin == prev) continue;
    prev = bin;
    if (mode == DedupMode::kConsecutive) {
      sink(bin);
    } else {
      scratch.push_back(bin);
    }
  }
  if (mode == DedupMode::kPerCorrespondence) {
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    for (const std::uint64_t bin : scratch) sink(bin);
  }
}

template <typename Body>
void RunWorkers(int workers, std::size_t n, Body&& body) {
  if (workers == 1) {
    body(0, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&body, w, begin, end] { body(w, begin, end); });
  }
  for (std::thread& t : pool) t.join();
}

double Residual(const ComplementBasis& c, const Vec4& q) {
  const double u = c.c3.dot(q);
  const double v = c.c4.dot(q);
  return std::sqrt(u * u + v * v);
}

std::vector<ComplementBasis> Complements(std::span<const Correspondence> corrs) {
  std::vector<ComplementBasis> out;
  out.reserve(corrs.size());
  for (const Correspondence& c : corrs) {
    out.push_back(ComputeComplementBasis(c.x, c.y));
  }
  return out;
}

// Label of the model with the smallest residual, or -1 above tau. Ties go to
// the lower model index.
std::vector<int> Assign(const std::vector<ComplementBasis>& comps,
                        const std::vector<Vec4>& models, double tau) {
  std::vector<int> labels(comps.size(), -1);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < models.size(); ++k) {
      const double r = Residual(comps[i], models[k]);
      if (r < best) {
        best = r;
        labels[i] = static_cast<int>(k);
      }
    }
    if (!(best <= tau)) labels[i] = -1;
  }
  return labels;
}

struct Refinement {
  std::vector<Vec4> models;
  std::vector<bool> refined;
  std::vector<int> labels;
};

// Two rounds of solve-on-assigned followed by reassignment.
Refinement Refine(const std::vector<ComplementBasis>& comps,
                  std::vector<Vec4> models, const VotingConfig& cfg) {
  Refinement r;
  r.refined.assign(models.size(), false);
  r.labels = Assign(comps, models, cfg.tau_ref);
  if (cfg.refine) {
    for (int round = 0; round < 2; ++round) {
      std::vector<Mat4> grams(models.size(), Mat4::Zero());
      std::vector<std::size_t> support(models.size(), 0);
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const int k = r.labels[i];
        if (k < 0) continue;
        grams[k].noalias() += comps[i].c3 * comps[i].c3.transpose() +
                              comps[i].c4 * comps[i].c4.transpose();
        ++support[k];
      }
      for (std::size_t k = 0; k < models.size(); ++k) {
        if (support[k] < 2) continue;
        const HomogeneousSolution sol = SolveHomogeneous(grams[k]);
        if (sol.degenerate) continue;
        models[k] = sol.rotation.coeffs();
        r.refined[k] = true;
      }
      r.labels = Assign(comps, models, cfg.tau_ref);
    }
  }
  r.models = std::move(models);
  return r;
}

RotationEstimate MakeEstimate(const Peak& peak, const Vec4& q, bool refined,
                              const std::vector<int>& labels, int label) {
  RotationEstimate est;
  est.peak_rotation = CanonicalizeHemisphere(Unproject(peak.center));
  est.rotation = CanonicalizeHemisphere(UnitQuaternion(q));
  est.votes = peak.votes;
  est.refined = refined;
  est.bin_index = peak.bin;
  est.bin_center = peak.center;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) est.inliers.push_back(i);
  }
  return est;
}

void RequireTwo(std::size_t n) {
  if (n < 2) {
    throw Error(ErrorKind::kDegenerate,
                "rotation voting needs at least 2 correspondences");
  }
}

}  // namespace

std::vector<std::uint64_t> CircleBins(const Correspondence& corr,
                                      const Accumulator3D& grid,
                                      const VotingConfig& cfg) {
  const SampleTable table(cfg.samples);
  std::vector<std::uint64_t> scratch, out;
  EmitCircle(corr, grid, table, cfg.dedup, scratch,
             [&out](std::uint64_t bin) { out.push_back(bin); });
  return out;
}

VoteResult Vote(std::span<const Correspondence> corrs, const VotingConfig& cfg) {
  cfg.Validate();
  const int bins = Accumulator3D::BinsForStep(cfg.epsilon);
  const std::uint64_t grid_bytes = Accumulator3D::DenseBytes(bins);
  const bool dense = grid_bytes <= cfg.memory_budget_bytes;
  VoteResult result{Accumulator3D(cfg.epsilon, dense
                                                   ? Accumulator3D::Storage::kDense
                                                   : Accumulator3D::Storage::kSparse),
                    {}};
  Accumulator3D& acc = result.accumulator;
  VoteDiagnostics& diag = result.diagnostics;
  diag.sparse_fallback = !dense;

  const std::size_t n = corrs.size();
  const int workers = static_cast<int>(
      std::clamp<std::size_t>(static_cast<std::size_t>(cfg.threads), 1,
                              std::max<std::size_t>(n, 1)));
  diag.workers = workers;
  const SampleTable table(cfg.samples);
  std::vector<std::uint64_t> increments(workers, 0);

  if (workers == 1) {
    std::vector<std::uint64_t> scratch;
    std::uint64_t count = 0;
    if (dense) {
      std::uint32_t* grid = acc.dense_data();
      for (const Correspondence& c : corrs) {
        EmitCircle(c, acc, table, cfg.dedup, scratch,
                   [grid, &count](std::uint64_t bin) {
                     ++grid[bin];
                     ++count;
                   });
      }
    } else {
      auto& map = acc.sparse_map();
      for (const Correspondence& c : corrs) {
        EmitCircle(c, acc, table, cfg.dedup, scratch,
                   [&map, &count](std::uint64_t bin) {
                     ++map[bin];
                     ++count;
                   });
      }
    }
    diag.increments = count;
    return result;
  }

  if (dense && (static_cast<std::uint64_t>(workers) + 1) * grid_bytes <=
                   cfg.memory_budget_bytes) {
    // Private grids per worker, summed afterwards.
    std::vector<std::vector<std::uint32_t>> grids(workers);
    RunWorkers(workers, n, [&](int w, std::size_t begin, std::size_t end) {
      grids[w].assign(acc.cell_count(), 0u);
      std::uint32_t* grid = grids[w].data();
      std::vector<std::uint64_t> scratch;
      std::uint64_t count = 0;
      for (std::size_t i = begin; i < end; ++i) {
        EmitCircle(corrs[i], acc, table, cfg.dedup, scratch,
                   [grid, &count](std::uint64_t bin) {
                     ++grid[bin];
                     ++count;
                   });
      }
      increments[w] = count;
    });
    std::uint32_t* out = acc.dense_data();
    for (const auto& grid : grids) {
      for (std::size_t i = 0; i < grid.size(); ++i) out[i] += grid[i];
    }
  } else if (dense) {
    diag.atomic_merge = true;
    std::uint32_t* grid = acc.dense_data();
    RunWorkers(workers, n, [&](int w, std::size_t begin, std::size_t end) {
      std::vector<std::uint64_t> scratch;
      std::uint64_t count = 0;
      for (std::size_t i = begin; i < end; ++i) {
        EmitCircle(corrs[i], acc, table, cfg.dedup, scratch,
                   [grid, &count](std::uint64_t bin) {
                     std::atomic_ref<std::uint32_t>(grid[bin]).fetch_add(
                         1, std::memory_order_relaxed);
                     ++count;
                   });
      }
      increments[w] = count;
    });
  } else {
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> maps(workers);
    RunWorkers(workers, n, [&](int w, std::size_t begin, std::size_t end) {
      auto& map = maps[w];
      std::vector<std::uint64_t> scratch;
      std::uint64_t count = 0;
      for (std::size_t i = begin; i < end; ++i) {
        EmitCircle(corrs[i], acc, table, cfg.dedup, scratch,
                   [&map, &count](std::uint64_t bin) {
                     ++map[bin];
                     ++count;
                   });
      }
      increments[w] = count;
    });
    auto& out = acc.sparse_map();
    for (const auto& map : maps) {
      for (const auto& [bin, c] : map) out[bin] += c;
    }
  }
  for (const std::uint64_t c : increments) diag.increments += c;
  return result;
}

std::vector<Peak> ExtractPeaks(const Accumulator3D& acc,
                               const PeakSettings& settings) {
  const auto [top_bin, top] = acc.Max();
  if (top == 0) throw Error(ErrorKind::kDegenerate, "accumulator is empty");
  std::vector<Peak> peaks;
  peaks.push_back({top_bin, acc.BinCenter(top_bin), top});
  if (settings.max_peaks <= 1) return peaks;

  const auto threshold = std::max<std::uint32_t>(
      1, static_cast<std::uint32_t>(
             std::ceil(settings.min_votes_fraction * top - 1e-9)));
  std::vector<std::pair<std::uint64_t, std::uint32_t>> candidates;
  for (const auto& entry : acc.Nonzero()) {
    if (entry.second >= threshold && entry.first != top_bin) {
      candidates.push_back(entry);
    }
  }
  // Max-heap on (votes, -index): pops in descending votes, lowest index
  // first on ties. Only the few candidates around accepted peaks are popped.
  const auto below = [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first > b.first;
  };
  std::make_heap(candidates.begin(), candidates.end(), below);

  const int r = settings.suppression_radius_bins;
  const double boundary =
      1.0 - (r + 1) * acc.step() * std::numbers::sqrt3;
  auto chebyshev = [&acc](std::uint64_t a, std::uint64_t b) {
    const auto u = acc.Unravel(a);
    const auto v = acc.Unravel(b);
    return std::max({std::abs(u[0] - v[0]), std::abs(u[1] - v[1]),
                     std::abs(u[2] - v[2])});
  };
  while (!candidates.empty() && peaks.size() < settings.max_peaks) {
    std::pop_heap(candidates.begin(), candidates.end(), below);
    const auto [bin, votes] = candidates.back();
    candidates.pop_back();
    const Vec3 center = acc.BinCenter(bin);
    bool suppressed = false;
    for (const Peak& p : peaks) {
      if (chebyshev(p.bin, bin) <= r) {
        suppressed = true;
        break;
      }
      const bool near_boundary =
          p.center.norm() >= boundary || center.norm() >= boundary;
      if (near_boundary && chebyshev(acc.MirrorBin(p.bin), bin) <= r) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) peaks.push_back({bin, center, votes});
  }
  return peaks;
}

std::vector<std::size_t> CollectInliers(std::span<const Correspondence> corrs,
                                        const UnitQuaternion& q, double tau) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    const ComplementBasis c = ComputeComplementBasis(corrs[i].x, corrs[i].y);
    if (Residual(c, q.coeffs()) <= tau) out.push_back(i);
  }
  return out;
}

RotationEstimate SolveRotation(std::span<const Correspondence> corrs,
                               const VotingConfig& cfg) {
  RequireTwo(corrs.size());
  const VoteResult voted = Vote(corrs, cfg);
  PeakSettings single = cfg.peaks;
  single.max_peaks = 1;
  const Peak peak = ExtractPeaks(voted.accumulator, single).front();
  const std::vector<ComplementBasis> comps = Complements(corrs);
  const Refinement r =
      Refine(comps, {Unproject(peak.center).coeffs()}, cfg);
  return MakeEstimate(peak, r.models[0], r.refined[0], r.labels, 0);
}

std::vector<RotationEstimate> SolveMultiRotation(
    std::span<const Correspondence> corrs, const VotingConfig& cfg,
    std::optional<std::size_t> expected_models) {
  RequireTwo(corrs.size());
  if (expected_models && *expected_models == 0) {
    throw Error(ErrorKind::kConfig, "expected model count must be >= 1");
  }
  const VoteResult voted = Vote(corrs, cfg);
  if (voted.accumulator.Max().second == 0) return {};
  PeakSettings settings = cfg.peaks;
  if (expected_models) {
    // A known model count replaces the relative-vote cutoff.
    settings.max_peaks = *expected_models;
    settings.min_votes_fraction = 0.0;
  }
  const std::vector<Peak> peaks = ExtractPeaks(voted.accumulator, settings);

  std::vector<Vec4> seeds;
  for (const Peak& p : peaks) seeds.push_back(Unproject(p.center).coeffs());
  const std::vector<ComplementBasis> comps = Complements(corrs);
  Refinement r = Refine(comps, std::move(seeds), cfg);

  // Drop estimates that converged onto an earlier (stronger) one.
  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    bool duplicate = false;
    for (const std::size_t a : kept) {
      if (RotationErrorDeg(UnitQuaternion(r.models[a]),
                           UnitQuaternion(r.models[k])) <
          cfg.duplicate_angle_deg) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(k);
  }
  std::vector<Vec4> models;
  for (const std::size_t k : kept) models.push_back(r.models[k]);
  const std::vector<int> labels = Assign(comps, models, cfg.tau_ref);

  std::vector<RotationEstimate> out;
  for (std::size_t m = 0; m < kept.size(); ++m) {
    out.push_back(MakeEstimate(peaks[kept[m]], models[m], r.refined[kept[m]],
                               labels, static_cast<int>(m)));
  }
  return out;
}

}  // namespace rotvote
