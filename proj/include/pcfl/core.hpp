#ifndef PCFL_CORE_HPP
#define PCFL_CORE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pcfl/errors.hpp"

namespace pcfl {

inline constexpr double kDefaultTolerance = 1e-9;

// Ordered list of distinct value labels; a label's position is its canonical
// index for the lifetime of the space.
class ValueSpace {
  public:
    ValueSpace() = default;
    explicit ValueSpace(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t index_of(const std::string& label) const;

    bool operator==(const ValueSpace& other) const { return labels_ == other.labels_; }

  private:
    std::vector<std::string> labels_;
};

// Disjoint, exhaustive classes over a ValueSpace's indices. Canonical form:
// indices ascending within a class, classes ordered by smallest member.
class Partition {
  public:
    Partition() = default;
    Partition(std::size_t space_size, std::vector<std::vector<std::size_t>> classes);

    static Partition singletons(std::size_t space_size);
    // Builds the partition from an assignment of each index to a class id.
    static Partition from_labels(const std::vector<std::size_t>& labels);

    std::size_t space_size() const { return space_size_; }
    std::size_t num_classes() const { return classes_.size(); }
    const std::vector<std::vector<std::size_t>>& classes() const { return classes_; }
    std::size_t class_of(std::size_t index) const { return class_of_.at(index); }

    // "∨"-joined member labels, e.g. "Marlboro∨Other".
    std::string class_label(std::size_t cls, const ValueSpace& space) const;

    bool operator==(const Partition& other) const {
        return space_size_ == other.space_size_ && classes_ == other.classes_;
    }

  private:
    std::size_t space_size_ = 0;
    std::vector<std::vector<std::size_t>> classes_;
    std::vector<std::size_t> class_of_;
};

enum class CptKind { observational, interventional };

// Row-stochastic table p(effect | cause), one row per cause value.
class Cpt {
  public:
    Cpt(ValueSpace cause_space, ValueSpace effect_space,
        std::vector<std::vector<double>> rows, CptKind kind);

    const ValueSpace& cause_space() const { return cause_space_; }
    const ValueSpace& effect_space() const { return effect_space_; }
    CptKind kind() const { return kind_; }
    std::size_t num_causes() const { return rows_.size(); }
    std::size_t num_effects() const { return effect_space_.size(); }
    double at(std::size_t cause, std::size_t effect) const { return rows_.at(cause).at(effect); }
    const std::vector<double>& row(std::size_t cause) const { return rows_.at(cause); }
    const std::vector<std::vector<double>>& rows() const { return rows_; }

  private:
    ValueSpace cause_space_;
    ValueSpace effect_space_;
    std::vector<std::vector<double>> rows_;
    CptKind kind_;
};

// u(c, e) over the cause x effect product space.
class UtilityTable {
  public:
    UtilityTable(ValueSpace cause_space, ValueSpace effect_space,
                 std::vector<std::vector<double>> values);

    const ValueSpace& cause_space() const { return cause_space_; }
    const ValueSpace& effect_space() const { return effect_space_; }
    double at(std::size_t cause, std::size_t effect) const { return values_.at(cause).at(effect); }
    const std::vector<double>& row(std::size_t cause) const { return values_.at(cause); }
    const std::vector<std::vector<double>>& values() const { return values_; }

  private:
    ValueSpace cause_space_;
    ValueSpace effect_space_;
    std::vector<std::vector<double>> values_;
};

// Observed (cause, effect) pairs, optionally with per-pair utilities.
// Either the label columns or the vector columns are populated, never both.
struct SampleSet {
    std::vector<std::string> cause_labels;
    std::vector<std::string> effect_labels;
    std::vector<std::vector<double>> cause_vectors;
    std::vector<std::vector<double>> effect_vectors;
    std::vector<double> utilities;  // empty, or one per record

    std::size_t size() const {
        return continuous() ? cause_vectors.size() : cause_labels.size();
    }
    bool continuous() const { return !cause_vectors.empty(); }
    bool has_utilities() const { return !utilities.empty(); }

    void validate() const;
};

// Path-compressed union-find over 0..n-1.
class UnionFind {
  public:
    explicit UnionFind(std::size_t n);
    std::size_t find(std::size_t x);
    void unite(std::size_t a, std::size_t b);
    // Partition of 0..n-1 in canonical form.
    Partition to_partition();

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> rank_;
};

// Finest partition consistent with all `true` entries of a reflexive,
// symmetric pairwise table; transitive closure is taken.
Partition partition_from_pairs(const ValueSpace& space,
                               const std::vector<std::vector<bool>>& equivalent);

// True iff `coarse` is a quotient of `fine`: every class of `fine` lies
// inside a single class of `coarse`.
bool refines(const Partition& coarse, const Partition& fine);

// Merges a CPT down to the macro level. Effect columns within a class are
// summed; cause rows within a class are averaged with the cause marginal
// renormalized inside the class.
Cpt coarsen_cpt(const Cpt& cpt, const Partition& cause_part, const Partition& effect_part,
                const std::vector<double>& cause_marginal);

// Macro-level utility table. Cause rows are averaged by the renormalized
// marginal; effect columns by the renormalized within-class conditional
// probabilities taken from `weights` (equal weights when absent).
UtilityTable coarsen_utility(const UtilityTable& util, const Partition& cause_part,
                             const Partition& effect_part,
                             const std::vector<double>& cause_marginal,
                             const Cpt* weights = nullptr);

// ValueSpace whose labels are the ∨-joined class labels.
ValueSpace coarse_space(const ValueSpace& space, const Partition& part);

}  // namespace pcfl

#endif
