#include "pird/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "pird/errors.hpp"

namespace pird {

SourceSet SourceSet::from_members(std::span<const int> members,
                                  int n_sources) {
  if (members.empty()) throw SizeError("source group must be non-empty");
  std::uint32_t mask = 0;
  for (int m : members) {
    if (m < 1 || m > n_sources) {
      throw SizeError("source index " + std::to_string(m) +
                      " outside 1.." + std::to_string(n_sources));
    }
    const std::uint32_t bit = 1u << (m - 1);
    if (mask & bit) {
      throw SizeError("duplicate source index " + std::to_string(m));
    }
    mask |= bit;
  }
  return SourceSet(mask);
}

SourceSet SourceSet::from_mask(std::uint32_t mask) {
  if (mask == 0) throw SizeError("source group must be non-empty");
  return SourceSet(mask);
}

std::vector<int> SourceSet::members() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i) {
    if (mask_ & (1u << i)) out.push_back(i + 1);
  }
  return out;
}

int SourceSet::size() const noexcept { return std::popcount(mask_); }

bool SourceSet::contains(int source) const noexcept {
  return source >= 1 && source <= 32 && (mask_ & (1u << (source - 1)));
}

std::strong_ordering SourceSet::operator<=>(const SourceSet& other) const {
  // Lexicographic on sorted members, computed on the masks directly: the
  // lowest differing bit decides, and a prefix sorts first.
  if (mask_ == other.mask_) return std::strong_ordering::equal;
  const std::uint32_t diff = mask_ ^ other.mask_;
  const std::uint32_t low = diff & (~diff + 1);
  const std::uint32_t below = low - 1;
  // Both share every member below `low`. Whoever owns `low` has a smaller
  // next element, unless the other has run out of members.
  if (mask_ & low) {
    return (other.mask_ & ~below) == 0 ? std::strong_ordering::greater
                                       : std::strong_ordering::less;
  }
  return (mask_ & ~below) == 0 ? std::strong_ordering::less
                               : std::strong_ordering::greater;
}

std::string SourceSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int m : members()) {
    if (!first) s += ",";
    s += std::to_string(m);
    first = false;
  }
  return s + "}";
}

Atom::Atom(std::vector<SourceSet> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) throw SizeError("atom must contain at least one group");
  std::sort(groups_.begin(), groups_.end());
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].mask() == 0) throw SizeError("empty source group in atom");
    for (std::size_t j = 0; j < groups_.size(); ++j) {
      if (i != j && groups_[i].is_subset_of(groups_[j])) {
        throw SizeError("groups " + groups_[i].to_string() + " and " +
                        groups_[j].to_string() + " do not form an antichain");
      }
    }
  }
}

Atom Atom::from_nested(const std::vector<std::vector<int>>& groups,
                       int n_sources) {
  std::vector<SourceSet> sets;
  sets.reserve(groups.size());
  for (const auto& g : groups) sets.push_back(SourceSet::from_members(g, n_sources));
  return Atom(std::move(sets));
}

std::vector<std::vector<int>> Atom::to_nested() const {
  std::vector<std::vector<int>> out;
  out.reserve(groups_.size());
  for (const auto& g : groups_) out.push_back(g.members());
  return out;
}

std::string Atom::to_string() const {
  std::string s;
  for (const auto& g : groups_) s += g.to_string();
  return s;
}

bool precedes(const Atom& a, const Atom& b) {
  return std::all_of(b.groups().begin(), b.groups().end(), [&](SourceSet gb) {
    return std::any_of(a.groups().begin(), a.groups().end(),
                       [&](SourceSet ga) { return ga.is_subset_of(gb); });
  });
}

namespace {

bool comparable(std::uint32_t a, std::uint32_t b) {
  return (a & ~b) == 0 || (b & ~a) == 0;
}

void extend_antichains(std::uint32_t next, std::uint32_t last,
                       std::vector<std::uint32_t>& chosen,
                       std::vector<std::vector<std::uint32_t>>& out) {
  for (std::uint32_t m = next; m <= last; ++m) {
    if (std::any_of(chosen.begin(), chosen.end(),
                    [m](std::uint32_t c) { return comparable(c, m); })) {
      continue;
    }
    chosen.push_back(m);
    out.push_back(chosen);
    extend_antichains(m + 1, last, chosen, out);
    chosen.pop_back();
  }
}

}  // namespace

RedundancyLattice::RedundancyLattice(int n_sources, int max_sources)
    : n_sources_(n_sources) {
  const int limit = std::min(max_sources, kHardMaxSources);
  if (n_sources < 1 || n_sources > limit) {
    throw SizeError("number of sources must be in 1.." + std::to_string(limit) +
                    ", got " + std::to_string(n_sources));
  }

  std::vector<std::vector<std::uint32_t>> raw;
  std::vector<std::uint32_t> chosen;
  extend_antichains(1, (1u << n_sources) - 1, chosen, raw);

  std::vector<Atom> unsorted;
  unsorted.reserve(raw.size());
  for (const auto& masks : raw) {
    std::vector<SourceSet> groups;
    for (auto m : masks) groups.push_back(SourceSet::from_mask(m));
    unsorted.emplace_back(std::move(groups));
  }

  const std::size_t n = unsorted.size();
  std::vector<std::size_t> down_size(n, 0);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) {
      if (pird::precedes(unsorted[a], unsorted[b])) ++down_size[b];
    }
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    if (down_size[x] != down_size[y]) return down_size[x] < down_size[y];
    return unsorted[x] < unsorted[y];
  });
  atoms_.reserve(n);
  for (auto p : perm) atoms_.push_back(std::move(unsorted[p]));

  order_.assign(n * n, false);
  down_sets_.resize(n);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) {
      if (pird::precedes(atoms_[a], atoms_[b])) {
        order_[a * n + b] = true;
        if (a != b) down_sets_[b].push_back(a);
      }
    }
  }
}

std::size_t RedundancyLattice::index_of(const Atom& atom) const {
  auto it = std::find(atoms_.begin(), atoms_.end(), atom);
  if (it == atoms_.end()) {
    throw IncompleteInputError("atom " + atom.to_string() +
                               " is not in the lattice");
  }
  return static_cast<std::size_t>(it - atoms_.begin());
}

std::size_t RedundancyLattice::singleton(int source) const {
  const int members[] = {source};
  return index_of(Atom({SourceSet::from_members(members, n_sources_)}));
}

RedundancyLattice enumerate_atoms(int n_sources, int max_sources) {
  return RedundancyLattice(n_sources, max_sources);
}

std::vector<double> moebius_invert(const RedundancyLattice& lattice,
                                   std::span<const double> cumulative) {
  if (cumulative.size() != lattice.size()) {
    throw IncompleteInputError("expected " + std::to_string(lattice.size()) +
                               " cumulative values, got " +
                               std::to_string(cumulative.size()));
  }
  std::vector<double> partial(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    if (std::isnan(cumulative[i])) {
      throw IncompleteInputError("missing value for atom " +
                                 lattice.atom(i).to_string());
    }
    double v = cumulative[i];
    for (std::size_t j : lattice.strict_down_set(i)) v -= partial[j];
    partial[i] = v;
  }
  return partial;
}

std::vector<double> moebius_invert(const RedundancyLattice& lattice,
                                   const std::map<Atom, double>& cumulative) {
  std::vector<double> values(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    auto it = cumulative.find(lattice.atom(i));
    if (it == cumulative.end()) {
      throw IncompleteInputError("missing value for atom " +
                                 lattice.atom(i).to_string());
    }
    values[i] = it->second;
  }
  return moebius_invert(lattice, values);
}

std::vector<double> accumulate(const RedundancyLattice& lattice,
                               std::span<const double> partial) {
  if (partial.size() != lattice.size()) {
    throw IncompleteInputError("expected " + std::to_string(lattice.size()) +
                               " atom values, got " +
                               std::to_string(partial.size()));
  }
  std::vector<double> cumulative(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    double v = partial[i];
    for (std::size_t j : lattice.strict_down_set(i)) v += partial[j];
    cumulative[i] = v;
  }
  return cumulative;
}

}  // namespace pird
