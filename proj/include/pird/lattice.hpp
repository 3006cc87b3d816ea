#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pird {

/// A non-empty group of sources, numbered 1..N. Stored as a bitmask where
/// bit (i-1) marks source i.
class SourceSet {
 public:
  SourceSet() = default;

  /// Validates that members are unique and within 1..n_sources.
  static SourceSet from_members(std::span<const int> members, int n_sources);
  static SourceSet from_mask(std::uint32_t mask);

  std::uint32_t mask() const noexcept { return mask_; }
  std::vector<int> members() const;
  int size() const noexcept;
  bool contains(int source) const noexcept;
  bool is_subset_of(SourceSet other) const noexcept {
    return (mask_ & ~other.mask_) == 0;
  }

  bool operator==(const SourceSet&) const = default;
  /// Lexicographic on the sorted member lists: {1} < {1,2} < {2}.
  std::strong_ordering operator<=>(const SourceSet& other) const;

  std::string to_string() const;  // "{1,2}"

 private:
  explicit SourceSet(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_ = 0;
};

/// A lattice node: an antichain of source groups.
class Atom {
 public:
  Atom() = default;
  /// Sorts the groups and checks the antichain property.
  explicit Atom(std::vector<SourceSet> groups);
  /// From nested 1-based member lists, e.g. {{1},{2}}.
  static Atom from_nested(const std::vector<std::vector<int>>& groups,
                          int n_sources);

  const std::vector<SourceSet>& groups() const noexcept { return groups_; }
  std::vector<std::vector<int>> to_nested() const;
  std::string to_string() const;  // "{1}{2}"

  bool operator==(const Atom&) const = default;
  auto operator<=>(const Atom& other) const { return groups_ <=> other.groups_; }

 private:
  std::vector<SourceSet> groups_;
};

/// a ⪯ b: every group of b contains some group of a.
bool precedes(const Atom& a, const Atom& b);

/// All antichains of non-empty subsets of {1..N} with their partial order.
///
/// Atoms are kept in a canonical order: by size of the down-set, then
/// lexicographically by groups. The order is a linear extension of ⪯, so
/// index order doubles as the bottom-up order used by Möbius inversion.
class RedundancyLattice {
 public:
  static constexpr int kDefaultMaxSources = 4;
  // N=6 has ~7.8 million atoms; nothing beyond 5 is tractable here.
  static constexpr int kHardMaxSources = 5;

  explicit RedundancyLattice(int n_sources,
                             int max_sources = kDefaultMaxSources);

  int n_sources() const noexcept { return n_sources_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }

  /// Throws IncompleteInputError when the atom is not in this lattice.
  std::size_t index_of(const Atom& atom) const;

  bool precedes(std::size_t a, std::size_t b) const {
    return order_[a * atoms_.size() + b];
  }
  /// Atoms strictly below atom i, in ascending index order.
  std::span<const std::size_t> strict_down_set(std::size_t i) const {
    return down_sets_.at(i);
  }

  std::size_t bottom() const noexcept { return 0; }
  std::size_t top() const noexcept { return atoms_.size() - 1; }
  /// Index of the singleton atom {{source}}.
  std::size_t singleton(int source) const;

 private:
  int n_sources_;
  std::vector<Atom> atoms_;
  std::vector<bool> order_;
  std::vector<std::vector<std::size_t>> down_sets_;
};

RedundancyLattice enumerate_atoms(
    int n_sources, int max_sources = RedundancyLattice::kDefaultMaxSources);

/// I^δ(α) = I^∩(α) − Σ_{β≺α} I^δ(β), evaluated bottom-up.
/// `cumulative` is indexed like lattice.atoms().
std::vector<double> moebius_invert(const RedundancyLattice& lattice,
                                   std::span<const double> cumulative);

std::vector<double> moebius_invert(const RedundancyLattice& lattice,
                                   const std::map<Atom, double>& cumulative);

/// Inverse of moebius_invert: I^∩(α) = Σ_{β⪯α} I^δ(β).
std::vector<double> accumulate(const RedundancyLattice& lattice,
                               std::span<const double> partial);

}  // namespace pird
