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


#include "rotvote/rigid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "rotvote/closed_form.hpp"
#include "rotvote/error.hpp"
#include "rotvote/quat_circle.hpp"
#include "rotvote/random.hpp"

namespace rotvote {

void RigidConfig::Validate() const {
  std::ostringstream os;
  if (!(mu_t > 0.0)) {
    os << "mu_t must be positive, got " << mu_t;
  } else if (!(min_len >= 0.0)) {
    os << "min_len must be >= 0, got " << min_len;
  } else if (k_max < 2) {
    os << "pair budget must be >= 2";
  } else if (!(translation.step > 0.0) || !(translation.hi > translation.lo)) {
    os << "translation grid needs lo < hi and step > 0";
  } else if ((translation.hi - translation.lo) / translation.step > 1e6) {
    os << "translation grid has too many cells per axis";
  } else if (!(tau_assign > 0.0)) {
    os << "tau_assign must be positive, got " << tau_assign;
  } else {
    voting.Validate();
    return;
  }
  throw Error(ErrorKind::kConfig, os.str());
}

double RigidResidual(const Correspondence& c, const RotationMatrix& r,
                     const Vec3& t) {
  return (r * c.x + t - c.y).norm();
}

std::vector<PairConstraint> MakePairs(std::span<const Correspondence> corrs,
                                      const RigidConfig& cfg,
                                      std::uint64_t seed) {
  const std::size_t n = corrs.size();
  if (n < 2) {
    throw Error(ErrorKind::kDegenerate, "pairing needs at least 2 points");
  }
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const bool subsample = total > cfg.k_max;
  CounterRng rng(CounterRng::Derive(seed, 0x7061697273ULL));
  std::uint64_t needed = cfg.k_max;
  std::uint64_t seen = 0;

  std::vector<PairConstraint> out;
  out.reserve(static_cast<std::size_t>(std::min(total, cfg.k_max)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (subsample) {
        // Selection sampling: keeps exactly k_max pairs, each subset equally
        // likely, in enumeration order.
        const std::uint64_t remaining = total - seen++;
        if (static_cast<double>(remaining) * rng.Uniform() >=
            static_cast<double>(needed)) {
          continue;
        }
        --needed;
      }
      PairConstraint p{corrs[i].x - corrs[j].x, corrs[i].y - corrs[j].y, i, j};
      if (p.m.norm() < cfg.min_len || p.n.norm() < cfg.min_len) continue;
      out.push_back(p);
    }
  }
  if (out.size() < 2) {
    throw Error(ErrorKind::kDegenerate,
                "fewer than 2 point pairs exceed the minimum length");
  }
  return out;
}

CheckedPairs InlierCheck(std::span<const PairConstraint> pairs, double mu_t) {
  if (!(mu_t > 0.0)) throw Error(ErrorKind::kConfig, "mu_t must be positive");
  CheckedPairs out;
  for (const PairConstraint& p : pairs) {
    const double lm = p.m.norm();
    const double ln = p.n.norm();
    if (!(std::abs(lm - ln) <= mu_t)) continue;
    out.pairs.push_back(p);
    out.directions.push_back({p.m / lm, p.n / ln});
    out.m_length.push_back(lm);
    out.n_length.push_back(ln);
  }
  return out;
}

namespace {

struct Cell {
  long long i, j, k;
};

bool CellOf(const Vec3& t, const TranslationGrid& grid, long long cells,
            Cell& out) {
  long long idx[3];
  for (int a = 0; a < 3; ++a) {
    const double f = std::floor((t[a] - grid.lo) / grid.step);
    if (!(f >= 0.0) || f >= static_cast<double>(cells)) return false;
    idx[a] = static_cast<long long>(f);
  }
  out = {idx[0], idx[1], idx[2]};
  return true;
}

template <typename IndexRange>
TranslationVote VoteTranslationImpl(std::span<const Correspondence> corrs,
                                    const IndexRange& indices,
                                    const RotationMatrix& r,
                                    const TranslationGrid& grid) {
  const auto cells =
      static_cast<long long>(std::llround((grid.hi - grid.lo) / grid.step));
  auto key = [cells](const Cell& c) {
    return static_cast<std::uint64_t>((c.i * cells + c.j) * cells + c.k);
  };
  std::unordered_map<std::uint64_t, std::uint32_t> counts;
  std::vector<std::pair<Vec3, Cell>> candidates;
  for (const std::size_t i : indices) {
    const Vec3 t = corrs[i].y - r * corrs[i].x;
    Cell c;
    if (!CellOf(t, grid, cells, c)) continue;
    ++counts[key(c)];
    candidates.emplace_back(t, c);
  }
  if (candidates.empty()) {
    throw Error(ErrorKind::kDomain,
                "translation domain too small: no candidate inside the grid");
  }
  std::uint64_t best_key = 0;
  std::uint32_t best = 0;
  for (const auto& [k, n] : counts) {
    if (n > best || (n == best && k < best_key)) {
      best = n;
      best_key = k;
    }
  }
  const Cell win{static_cast<long long>(best_key / (cells * cells)),
                 static_cast<long long>(best_key / cells % cells),
                 static_cast<long long>(best_key % cells)};

  // Mean as offsets from one member, so identical candidates come back
  // unchanged.
  TranslationVote out;
  out.cell_votes = best;
  Vec3 ref = Vec3::Zero();
  Vec3 sum = Vec3::Zero();
  for (const auto& [t, c] : candidates) {
    if (std::abs(c.i - win.i) > 1 || std::abs(c.j - win.j) > 1 ||
        std::abs(c.k - win.k) > 1) {
      continue;
    }
    if (out.support == 0) ref = t;
    sum += t - ref;
    ++out.support;
  }
  out.translation = ref + sum / static_cast<double>(out.support);
  return out;
}

struct AllIndices {
  std::size_t n;
  struct Iter {
    std::size_t i;
    std::size_t operator*() const { return i; }
    Iter& operator++() {
      ++i;
      return *this;
    }
    bool operator!=(const Iter& o) const { return i != o.i; }
  };
  Iter begin() const { return {0}; }
  Iter end() const { return {n}; }
};

void RequireThree(std::size_t n) {
  if (n < 3) {
    throw Error(ErrorKind::kDegenerate, "rigid estimation needs at least 3 points");
  }
}

CheckedPairs PairsAndCheck(std::span<const Correspondence> corrs,
                           const RigidConfig& cfg, std::uint64_t seed,
                           RigidDiagnostics& diag) {
  const std::vector<PairConstraint> pairs = MakePairs(corrs, cfg, seed);
  CheckedPairs checked = InlierCheck(pairs, cfg.mu_t);
  diag.pairs_generated = pairs.size();
  diag.pairs_surviving_check = checked.pairs.size();
  if (checked.pairs.size() < 2) {
    throw Error(ErrorKind::kDegenerate,
                "fewer than 2 point pairs passed the length check");
  }
  return checked;
}

std::vector<std::size_t> Members(std::span<const Correspondence> corrs,
                                 const RotationMatrix& r, const Vec3& t,
                                 double tau) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    if (RigidResidual(corrs[i], r, t) <= tau) out.push_back(i);
  }
  return out;
}

struct Motion {
  UnitQuaternion rotation;
  Vec3 translation;
  RigidDiagnostics diag;
};

// Label of the motion with the smallest residual, or -1 above tau.
std::vector<int> AssignMotions(std::span<const Correspondence> corrs,
                               const std::vector<Motion>& motions, double tau) {
  std::vector<RotationMatrix> rs;
  for (const Motion& m : motions) rs.push_back(QuatToMatrix(m.rotation));
  std::vector<int> labels(corrs.size(), -1);
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < motions.size(); ++k) {
      const double r = RigidResidual(corrs[i], rs[k], motions[k].translation);
      if (r < best) {
        best = r;
        labels[i] = static_cast<int>(k);
      }
    }
    if (!(best <= tau)) labels[i] = -1;
  }
  return labels;
}

// Keeps motions with at least 3 members and relabels them densely.
void DropSmall(std::vector<Motion>& motions, std::vector<int>& labels) {
  std::vector<std::size_t> size(motions.size(), 0);
  for (const int l : labels) {
    if (l >= 0) ++size[l];
  }
  std::vector<int> remap(motions.size(), -1);
  std::vector<Motion> kept;
  for (std::size_t k = 0; k < motions.size(); ++k) {
    if (size[k] < 3) continue;
    remap[k] = static_cast<int>(kept.size());
    kept.push_back(motions[k]);
  }
  for (int& l : labels) {
    if (l >= 0) l = remap[l];
  }
  motions = std::move(kept);
}

}  // namespace

TranslationVote VoteTranslation(std::span<const Correspondence> corrs,
                                const RotationMatrix& r,
                                const TranslationGrid& grid) {
  return VoteTranslationImpl(corrs, AllIndices{corrs.size()}, r, grid);
}

TranslationVote VoteTranslation(std::span<const Correspondence> corrs,
                                std::span<const std::size_t> indices,
                                const RotationMatrix& r,
                                const TranslationGrid& grid) {
  return VoteTranslationImpl(corrs, indices, r, grid);
}

RigidEstimate SolveRigid(std::span<const Correspondence> corrs,
                         const RigidConfig& cfg, std::uint64_t seed) {
  RequireThree(corrs.size());
  cfg.Validate();
  RigidEstimate est;
  const CheckedPairs checked = PairsAndCheck(corrs, cfg, seed, est.diagnostics);
  const RotationEstimate rot = SolveRotation(checked.directions, cfg.voting);
  const RotationMatrix r = QuatToMatrix(rot.rotation);
  const TranslationVote tv = VoteTranslation(corrs, r, cfg.translation);
  est.rotation = rot.rotation;
  est.translation = tv.translation;
  est.inliers = Members(corrs, r, tv.translation, cfg.tau_assign);
  est.diagnostics.votes = rot.votes;
  est.diagnostics.translation_votes = tv.cell_votes;
  est.diagnostics.refined = rot.refined;
  return est;
}

std::vector<RigidEstimate> SolveMultiRigid(
    std::span<const Correspondence> corrs, const RigidConfig& cfg,
    std::optional<std::size_t> expected_models, std::uint64_t seed) {
  RequireThree(corrs.size());
  cfg.Validate();
  RigidDiagnostics shared;
  const CheckedPairs checked = PairsAndCheck(corrs, cfg, seed, shared);
  const std::vector<RotationEstimate> rotations =
      SolveMultiRotation(checked.directions, cfg.voting, expected_models);

  std::vector<Motion> motions;
  for (const RotationEstimate& rot : rotations) {
    TranslationVote tv;
    try {
      tv = VoteTranslation(corrs, QuatToMatrix(rot.rotation), cfg.translation);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDomain) throw;
      continue;
    }
    Motion m{rot.rotation, tv.translation, shared};
    m.diag.votes = rot.votes;
    m.diag.translation_votes = tv.cell_votes;
    m.diag.refined = rot.refined;
    motions.push_back(m);
  }
  std::vector<int> labels = AssignMotions(corrs, motions, cfg.tau_assign);
  DropSmall(motions, labels);

  // Refit each motion on its members.
  for (std::size_t k = 0; k < motions.size(); ++k) {
    const int label = static_cast<int>(k);
    Mat4 gram = Mat4::Zero();
    std::size_t used = 0;
    for (std::size_t p = 0; p < checked.pairs.size(); ++p) {
      if (labels[checked.pairs[p].i] != label ||
          labels[checked.pairs[p].j] != label) {
        continue;
      }
      const ComplementBasis c = ComputeComplementBasis(
          checked.directions[p].x, checked.directions[p].y);
      gram.noalias() += c.c3 * c.c3.transpose() + c.c4 * c.c4.transpose();
      ++used;
    }
    if (used >= 2) {
      const HomogeneousSolution sol = SolveHomogeneous(gram);
      if (!sol.degenerate) {
        motions[k].rotation = sol.rotation;
        motions[k].diag.refined = true;
      }
    }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < corrs.size(); ++i) {
      if (labels[i] == label) members.push_back(i);
    }
    try {
      motions[k].translation =
          VoteTranslation(corrs, members, QuatToMatrix(motions[k].rotation),
                          cfg.translation)
              .translation;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDomain) throw;
    }
  }
  labels = AssignMotions(corrs, motions, cfg.tau_assign);
  DropSmall(motions, labels);

  std::vector<RigidEstimate> out;
  for (std::size_t k = 0; k < motions.size(); ++k) {
    RigidEstimate est;
    est.rotation = motions[k].rotation;
    est.translation = motions[k].translation;
    est.diagnostics = motions[k].diag;
    for (std::size_t i = 0; i < corrs.size(); ++i) {
      if (labels[i] == static_cast<int>(k)) est.inliers.push_back(i);
    }
    out.push_back(std::move(est));
  }
  return out;
}

}  // namespace rotvote
