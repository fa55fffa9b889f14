#include "pair_csp.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <stdexcept>

namespace antipodal::detail {

LabelMask labels_between(int lo, int hi) {
  LabelMask mask = 0;
  for (int a = std::max(lo, 1); a <= hi; ++a) mask |= label_bit(a);
  return mask;
}

TriangleTable::TriangleTable(int max_label, const std::function<bool(int, int, int)>& allowed)
    : max_label_(max_label), third_((max_label + 1) * (max_label + 1), 0) {
  if (max_label < 1 || max_label > kMaxCspLabel) {
    throw std::invalid_argument("label range unsupported by the pair engine");
  }
  for (int a = 1; a <= max_label; ++a) {
    for (int b = 1; b <= max_label; ++b) {
      for (int c = 1; c <= max_label; ++c) {
        if (allowed(a, b, c)) third_[a * stride() + b] |= label_bit(c);
      }
    }
  }
}

PairCsp::PairCsp(int n, const TriangleTable& table)
    : n_(n), table_(&table), dom_(static_cast<std::size_t>(n) * n, 0) {
  const LabelMask all = labels_between(1, table.max_label());
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v) dom_[index(u, v)] = all;
    }
  }
}

void PairCsp::restrict(int u, int v, LabelMask mask) {
  dom_[index(u, v)] &= mask;
  dom_[index(v, u)] &= mask;
}

bool PairCsp::propagate() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int u = 0; u < n_; ++u) {
      for (int v = u + 1; v < n_; ++v) {
        LabelMask d = dom_[index(u, v)];
        if (d == 0) return false;
        for (int w = 0; w < n_ && d != 0; ++w) {
          if (w == u || w == v) continue;
          const LabelMask du = dom_[index(u, w)];
          const LabelMask dv = dom_[index(v, w)];
          LabelMask supported = 0;
          for (LabelMask rest = d; rest != 0; rest &= rest - 1) {
            const int a = std::countr_zero(rest);
            for (LabelMask bs = du; bs != 0; bs &= bs - 1) {
              if (table_->third(a, std::countr_zero(bs)) & dv) {
                supported |= label_bit(a);
                break;
              }
            }
          }
          d = supported;
        }
        if (d != dom_[index(u, v)]) {
          dom_[index(u, v)] = dom_[index(v, u)] = d;
          changed = true;
          if (d == 0) return false;
        }
      }
    }
  }
  return true;
}

std::vector<int> PairCsp::labels() const {
  std::vector<int> out(dom_.size(), 0);
  for (int u = 0; u < n_; ++u) {
    for (int v = 0; v < n_; ++v) {
      if (u != v) out[index(u, v)] = std::countr_zero(dom_[index(u, v)]);
    }
  }
  return out;
}

bool PairCsp::solved() const {
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      if (std::popcount(dom_[index(u, v)]) != 1) return false;
    }
  }
  return consistent(labels());
}

std::vector<int> PairCsp::select_simultaneous(const Preference& rank) const {
  std::vector<int> out(dom_.size(), 0);
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      int best = 0;
      for (LabelMask rest = dom_[index(u, v)]; rest != 0; rest &= rest - 1) {
        const int a = std::countr_zero(rest);
        if (best == 0 || rank(a) < rank(best) || (rank(a) == rank(best) && a < best)) best = a;
      }
      out[index(u, v)] = out[index(v, u)] = best;
    }
  }
  return out;
}

bool PairCsp::consistent(const std::vector<int>& labels) const {
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      const int a = labels[index(u, v)];
      if (a == 0 || !(dom_[index(u, v)] & label_bit(a))) return false;
      for (int w = v + 1; w < n_; ++w) {
        if (!table_->allowed(a, labels[index(v, w)], labels[index(u, w)])) return false;
      }
    }
  }
  return true;
}

std::optional<std::vector<int>> PairCsp::backtrack(const Preference& rank) const {
  PairCsp copy = *this;
  if (!copy.propagate()) return std::nullopt;
  return copy.search(0, rank);
}

std::optional<std::vector<int>> PairCsp::search(std::size_t pair_pos, const Preference& rank) const {
  // Pairs are visited in lexicographic order; pair_pos counts them.
  std::size_t pos = 0;
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v, ++pos) {
      if (pos < pair_pos) continue;
      const LabelMask d = dom_[index(u, v)];
      if (std::popcount(d) == 1) continue;
      std::vector<int> order;
      for (LabelMask rest = d; rest != 0; rest &= rest - 1) order.push_back(std::countr_zero(rest));
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return rank(a) < rank(b); });
      for (int a : order) {
        PairCsp next = *this;
        next.assign(u, v, a);
        if (!next.propagate()) continue;
        if (auto found = next.search(pos + 1, rank)) return found;
      }
      return std::nullopt;
    }
  }
  if (!consistent(labels())) return std::nullopt;
  return labels();
}

std::optional<std::vector<int>> PairCsp::backtrack_invariant(const Preference& rank,
                                                             const std::vector<SignedPermutation>& group,
                                                             int flip_sum) const {
  PairCsp copy = *this;
  if (!copy.propagate()) return std::nullopt;
  return copy.search_invariant(0, rank, group, flip_sum);
}

std::optional<std::vector<int>> PairCsp::search_invariant(std::size_t pair_pos, const Preference& rank,
                                                          const std::vector<SignedPermutation>& group,
                                                          int flip_sum) const {
  std::size_t pos = 0;
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v, ++pos) {
      if (pos < pair_pos) continue;
      const LabelMask d = dom_[index(u, v)];
      if (std::popcount(d) == 1) continue;
      std::vector<int> order;
      for (LabelMask rest = d; rest != 0; rest &= rest - 1) order.push_back(std::countr_zero(rest));
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return rank(a) < rank(b); });
      for (int a : order) {
        PairCsp next = *this;
        bool ok = true;
        for (const auto& g : group) {
          const int b = g.sign[u] != g.sign[v] ? flip_sum - a : a;
          if (b < 1 || b > table_->max_label()) {
            ok = false;
            break;
          }
          next.assign(g.image[u], g.image[v], b);
          if (next.domain(g.image[u], g.image[v]) == 0) {
            ok = false;
            break;
          }
        }
        if (!ok || !next.propagate()) continue;
        if (auto found = next.search_invariant(pos + 1, rank, group, flip_sum)) return found;
      }
      return std::nullopt;
    }
  }
  if (!consistent(labels())) return std::nullopt;
  return labels();
}

TriangleTable general_table(const GeneralClassDescriptor& desc) {
  return TriangleTable(desc.diameter, [&](int a, int b, int c) {
    return !is_forbidden_triangle(a, b, c, desc);
  });
}

TriangleTable switching_table(const ClassDescriptor& desc) {
  const int d = desc.delta;
  return TriangleTable(d - 1, [&](int a, int b, int c) {
    return !is_forbidden_triangle(a, b, c, desc) && !is_forbidden_triangle(a, d - b, d - c, desc) &&
           !is_forbidden_triangle(d - a, b, d - c, desc) &&
           !is_forbidden_triangle(d - a, d - b, c, desc);
  });
}

PairCsp::Preference centre_preference(int max_label) {
  const int centre = (max_label + 2) / 2;  // ceil((max_label + 1) / 2)
  return [centre](int a) { return std::abs(a - centre); };
}

PairCsp::Preference switch_symmetric_preference(int delta) {
  return [delta](int a) { return std::abs(2 * a - delta); };
}

}  // namespace antipodal::detail
