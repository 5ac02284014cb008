#include "pcfl/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace pcfl {

namespace {

void check_probability_rows(const std::vector<std::vector<double>>& rows, std::size_t n_effects) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != n_effects) {
            throw ShapeError("CPT row " + std::to_string(j) + " has " +
                             std::to_string(rows[j].size()) + " entries, expected " +
                             std::to_string(n_effects));
        }
        double sum = 0.0;
        for (double p : rows[j]) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw InputError("CPT entry out of [0,1] in row " + std::to_string(j));
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > kDefaultTolerance) {
            throw InputError("CPT row " + std::to_string(j) + " sums to " + std::to_string(sum));
        }
    }
}

}  // namespace

ValueSpace::ValueSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw InputError("ValueSpace requires at least one label");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw InputError("duplicate label '" + l + "' in ValueSpace");
    }
}

std::size_t ValueSpace::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InputError("label '" + label + "' not in value space");
    return static_cast<std::size_t>(it - labels_.begin());
}

Partition::Partition(std::size_t space_size, std::vector<std::vector<std::size_t>> classes)
    : space_size_(space_size), classes_(std::move(classes)), class_of_(space_size, SIZE_MAX) {
    for (auto& cls : classes_) {
        if (cls.empty()) throw InputError("empty class in partition");
        std::sort(cls.begin(), cls.end());
    }
    std::sort(classes_.begin(), classes_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::size_t covered = 0;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        for (std::size_t idx : classes_[c]) {
            if (idx >= space_size_) throw ShapeError("partition index out of range");
            if (class_of_[idx] != SIZE_MAX) throw InputError("partition classes overlap");
            class_of_[idx] = c;
            ++covered;
        }
    }
    if (covered != space_size_) throw InputError("partition does not cover the value space");
}

Partition Partition::singletons(std::size_t space_size) {
    std::vector<std::vector<std::size_t>> classes(space_size);
    for (std::size_t i = 0; i < space_size; ++i) classes[i] = {i};
    return Partition(space_size, std::move(classes));
}

Partition Partition::from_labels(const std::vector<std::size_t>& labels) {
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    std::vector<std::vector<std::size_t>> classes;
    classes.reserve(groups.size());
    for (auto& [_, members] : groups) classes.push_back(std::move(members));
    return Partition(labels.size(), std::move(classes));
}

std::string Partition::class_label(std::size_t cls, const ValueSpace& space) const {
    if (space.size() != space_size_) throw ShapeError("value space does not match partition");
    std::string out;
    for (std::size_t idx : classes_.at(cls)) {
        if (!out.empty()) out += "∨";  // ∨
        out += space.label(idx);
    }
    return out;
}

Cpt::Cpt(ValueSpace cause_space, ValueSpace effect_space,
         std::vector<std::vector<double>> rows, CptKind kind)
    : cause_space_(std::move(cause_space)),
      effect_space_(std::move(effect_space)),
      rows_(std::move(rows)),
      kind_(kind) {
    if (rows_.size() != cause_space_.size()) {
        throw ShapeError("CPT has " + std::to_string(rows_.size()) + " rows for " +
                         std::to_string(cause_space_.size()) + " cause values");
    }
    check_probability_rows(rows_, effect_space_.size());
}

UtilityTable::UtilityTable(ValueSpace cause_space, ValueSpace effect_space,
                           std::vector<std::vector<double>> values)
    : cause_space_(std::move(cause_space)),
      effect_space_(std::move(effect_space)),
      values_(std::move(values)) {
    if (values_.size() != cause_space_.size()) {
        throw ShapeError("utility table row count does not match cause space");
    }
    for (const auto& row : values_) {
        if (row.size() != effect_space_.size()) {
            throw ShapeError("utility table column count does not match effect space");
        }
        for (double v : row) {
            if (!std::isfinite(v)) throw InputError("non-finite utility value");
        }
    }
}

void SampleSet::validate() const {
    const bool cont = continuous();
    if (cont) {
        if (!cause_labels.empty() || !effect_labels.empty()) {
            throw InputError("sample set mixes label and vector records");
        }
        if (cause_vectors.size() != effect_vectors.size()) {
            throw InputError("cause/effect vector counts differ");
        }
        for (const auto& v : cause_vectors) {
            if (v.size() != cause_vectors.front().size()) {
                throw InputError("cause vectors have mixed dimensions");
            }
        }
        for (const auto& v : effect_vectors) {
            if (v.size() != effect_vectors.front().size()) {
                throw InputError("effect vectors have mixed dimensions");
            }
        }
    } else {
        if (cause_labels.size() != effect_labels.size()) {
            throw InputError("cause/effect label counts differ");
        }
    }
    if (!utilities.empty() && utilities.size() != size()) {
        throw InputError("utilities must be present for all records or none");
    }
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

void UnionFind::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
}

Partition UnionFind::to_partition() {
    std::vector<std::size_t> labels(parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) labels[i] = find(i);
    return Partition::from_labels(labels);
}

Partition partition_from_pairs(const ValueSpace& space,
                               const std::vector<std::vector<bool>>& equivalent) {
    const std::size_t n = space.size();
    if (equivalent.size() != n) throw ShapeError("pairwise table size does not match value space");
    for (const auto& row : equivalent) {
        if (row.size() != n) throw ShapeError("pairwise table is not square");
    }
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (equivalent[i][j] || equivalent[j][i]) uf.unite(i, j);
        }
    }
    return uf.to_partition();
}

bool refines(const Partition& coarse, const Partition& fine) {
    if (coarse.space_size() != fine.space_size()) {
        throw ShapeError("partitions are over different value spaces");
    }
    for (const auto& cls : fine.classes()) {
        const std::size_t target = coarse.class_of(cls.front());
        for (std::size_t idx : cls) {
            if (coarse.class_of(idx) != target) return false;
        }
    }
    return true;
}

ValueSpace coarse_space(const ValueSpace& space, const Partition& part) {
    std::vector<std::string> labels;
    labels.reserve(part.num_classes());
    for (std::size_t c = 0; c < part.num_classes(); ++c) {
        labels.push_back(part.class_label(c, space));
    }
    return ValueSpace(std::move(labels));
}

namespace {

// Marginal weights renormalized within each class of `part`.
std::vector<std::vector<double>> class_weights(const Partition& part,
                                               const std::vector<double>& marginal) {
    std::vector<std::vector<double>> weights(part.num_classes());
    for (std::size_t c = 0; c < part.num_classes(); ++c) {
        const auto& cls = part.classes()[c];
        double mass = 0.0;
        for (std::size_t j : cls) mass += marginal.at(j);
        if (mass <= 0.0) {
            throw DegenerateClassError("cause class " + std::to_string(c) +
                                       " has zero marginal mass");
        }
        weights[c].reserve(cls.size());
        for (std::size_t j : cls) weights[c].push_back(marginal.at(j) / mass);
    }
    return weights;
}

}  // namespace

Cpt coarsen_cpt(const Cpt& cpt, const Partition& cause_part, const Partition& effect_part,
                const std::vector<double>& cause_marginal) {
    if (cause_part.space_size() != cpt.num_causes() ||
        effect_part.space_size() != cpt.num_effects()) {
        throw ShapeError("partition sizes do not match CPT");
    }
    if (cause_marginal.size() != cpt.num_causes()) {
        throw ShapeError("cause marginal length does not match CPT");
    }
    const auto weights = class_weights(cause_part, cause_marginal);
    std::vector<std::vector<double>> rows(cause_part.num_classes(),
                                          std::vector<double>(effect_part.num_classes(), 0.0));
    for (std::size_t a = 0; a < cause_part.num_classes(); ++a) {
        const auto& ccls = cause_part.classes()[a];
        for (std::size_t b = 0; b < effect_part.num_classes(); ++b) {
            double p = 0.0;
            for (std::size_t m = 0; m < ccls.size(); ++m) {
                double col = 0.0;
                for (std::size_t i : effect_part.classes()[b]) col += cpt.at(ccls[m], i);
                p += weights[a][m] * col;
            }
            rows[a][b] = p;
        }
        // squash residual float error so the invariant holds exactly
        double sum = std::accumulate(rows[a].begin(), rows[a].end(), 0.0);
        if (std::abs(sum - 1.0) > kDefaultTolerance) {
            throw InputError("coarse CPT row does not sum to 1");
        }
    }
    return Cpt(coarse_space(cpt.cause_space(), cause_part),
               coarse_space(cpt.effect_space(), effect_part), std::move(rows), cpt.kind());
}

UtilityTable coarsen_utility(const UtilityTable& util, const Partition& cause_part,
                             const Partition& effect_part,
                             const std::vector<double>& cause_marginal, const Cpt* weights_cpt) {
    if (cause_part.space_size() != util.cause_space().size() ||
        effect_part.space_size() != util.effect_space().size()) {
        throw ShapeError("partition sizes do not match utility table");
    }
    if (cause_marginal.size() != util.cause_space().size()) {
        throw ShapeError("cause marginal length does not match utility table");
    }
    if (weights_cpt != nullptr && (weights_cpt->num_causes() != util.cause_space().size() ||
                                   weights_cpt->num_effects() != util.effect_space().size())) {
        throw ShapeError("weight CPT does not match utility table");
    }
    const auto cweights = class_weights(cause_part, cause_marginal);
    std::vector<std::vector<double>> values(cause_part.num_classes(),
                                            std::vector<double>(effect_part.num_classes(), 0.0));
    for (std::size_t a = 0; a < cause_part.num_classes(); ++a) {
        const auto& ccls = cause_part.classes()[a];
        for (std::size_t b = 0; b < effect_part.num_classes(); ++b) {
            const auto& ecls = effect_part.classes()[b];
            double u = 0.0;
            for (std::size_t m = 0; m < ccls.size(); ++m) {
                const std::size_t j = ccls[m];
                // effect-class weights: renormalized conditionals when a CPT
                // is supplied, equal weights otherwise
                double mass = 0.0;
                std::vector<double> ew(ecls.size());
                for (std::size_t t = 0; t < ecls.size(); ++t) {
                    ew[t] = weights_cpt ? weights_cpt->at(j, ecls[t]) : 1.0;
                    mass += ew[t];
                }
                if (mass <= 0.0) {
                    throw DegenerateClassError("effect class " + std::to_string(b) +
                                               " has zero conditional mass in cause row " +
                                               std::to_string(j));
                }
                double row_u = 0.0;
                for (std::size_t t = 0; t < ecls.size(); ++t) {
                    row_u += (ew[t] / mass) * util.at(j, ecls[t]);
                }
                u += cweights[a][m] * row_u;
            }
            values[a][b] = u;
        }
    }
    return UtilityTable(coarse_space(util.cause_space(), cause_part),
                        coarse_space(util.effect_space(), effect_part), std::move(values));
}

}  // namespace pcfl
