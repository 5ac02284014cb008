#include "pcfl/dist.hpp"

#include <cmath>

#include "json.hpp"

namespace pcfl {

namespace {

void check_simplex(const std::vector<double>& p, const std::string& what) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw InputError(what + " has a negative entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kDefaultTolerance) {
        throw InputError(what + " sums to " + std::to_string(sum));
    }
}

}  // namespace

ConfoundedJoint::ConfoundedJoint(ValueSpace cause_space, ValueSpace effect_space,
                                 ValueSpace confounder_space,
                                 std::vector<std::vector<std::vector<double>>> iota,
                                 std::vector<std::vector<double>> beta, std::vector<double> gamma)
    : cause_space_(std::move(cause_space)),
      effect_space_(std::move(effect_space)),
      confounder_space_(std::move(confounder_space)),
      iota_(std::move(iota)),
      beta_(std::move(beta)),
      gamma_(std::move(gamma)) {
    const std::size_t n = effect_space_.size();
    const std::size_t m = cause_space_.size();
    const std::size_t w = confounder_space_.size();
    if (iota_.size() != n) throw ShapeError("iota effect dimension mismatch");
    for (const auto& plane : iota_) {
        if (plane.size() != w) throw ShapeError("iota confounder dimension mismatch");
        for (const auto& row : plane) {
            if (row.size() != m) throw ShapeError("iota cause dimension mismatch");
        }
    }
    if (beta_.size() != m) throw ShapeError("beta cause dimension mismatch");
    for (const auto& row : beta_) {
        if (row.size() != w) throw ShapeError("beta confounder dimension mismatch");
    }
    if (gamma_.size() != w) throw ShapeError("gamma length mismatch");

    for (std::size_t l = 0; l < w; ++l) {
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = iota_[i][l][j];
            check_simplex(col, "iota[:, z=" + confounder_space_.label(l) +
                                   ", c=" + cause_space_.label(j) + "]");
        }
        std::vector<double> bcol(m);
        for (std::size_t j = 0; j < m; ++j) bcol[j] = beta_[j][l];
        check_simplex(bcol, "beta[:, z=" + confounder_space_.label(l) + "]");
    }
    check_simplex(gamma_, "gamma");
}

std::string ConfoundedJoint::to_json() const {
    nlohmann::json doc;
    doc["cause_labels"] = cause_space_.labels();
    doc["effect_labels"] = effect_space_.labels();
    doc["confounder_labels"] = confounder_space_.labels();
    doc["iota"] = iota_;
    doc["beta"] = beta_;
    doc["gamma"] = gamma_;
    return doc.dump(2);
}

ConfoundedJoint ConfoundedJoint::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid joint JSON: ") + e.what());
    }
    try {
        return ConfoundedJoint(
            ValueSpace(doc.at("cause_labels").get<std::vector<std::string>>()),
            ValueSpace(doc.at("effect_labels").get<std::vector<std::string>>()),
            ValueSpace(doc.at("confounder_labels").get<std::vector<std::string>>()),
            doc.at("iota").get<std::vector<std::vector<std::vector<double>>>>(),
            doc.at("beta").get<std::vector<std::vector<double>>>(),
            doc.at("gamma").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("joint JSON missing or malformed field: ") + e.what());
    }
}

Cpt interventional_cpt(const ConfoundedJoint& joint) {
    std::vector<std::vector<double>> rows(joint.num_causes(),
                                          std::vector<double>(joint.num_effects(), 0.0));
    for (std::size_t j = 0; j < joint.num_causes(); ++j) {
        for (std::size_t i = 0; i < joint.num_effects(); ++i) {
            double p = 0.0;
            for (std::size_t l = 0; l < joint.num_confounders(); ++l) {
                p += joint.iota(i, l, j) * joint.gamma(l);
            }
            rows[j][i] = p;
        }
    }
    return Cpt(joint.cause_space(), joint.effect_space(), std::move(rows),
               CptKind::interventional);
}

Cpt observational_cpt(const ConfoundedJoint& joint) {
    const auto marginal = cause_marginal(joint);
    std::vector<std::vector<double>> rows(joint.num_causes(),
                                          std::vector<double>(joint.num_effects(), 0.0));
    for (std::size_t j = 0; j < joint.num_causes(); ++j) {
        if (marginal[j] <= 0.0) {
            throw DegenerateClassError("cause value '" + joint.cause_space().label(j) +
                                       "' has zero marginal probability");
        }
        for (std::size_t i = 0; i < joint.num_effects(); ++i) {
            double p = 0.0;
            for (std::size_t l = 0; l < joint.num_confounders(); ++l) {
                p += joint.iota(i, l, j) * joint.beta(j, l) * joint.gamma(l);
            }
            rows[j][i] = p / marginal[j];
        }
    }
    return Cpt(joint.cause_space(), joint.effect_space(), std::move(rows), CptKind::observational);
}

std::vector<double> cause_marginal(const ConfoundedJoint& joint) {
    std::vector<double> marginal(joint.num_causes(), 0.0);
    for (std::size_t j = 0; j < joint.num_causes(); ++j) {
        for (std::size_t l = 0; l < joint.num_confounders(); ++l) {
            marginal[j] += joint.beta(j, l) * joint.gamma(l);
        }
    }
    return marginal;
}

double eq_constraint_residual(const ConfoundedJoint& joint, const UtilityTable& util,
                              std::size_t j, std::size_t k) {
    if (j >= joint.num_causes() || k >= joint.num_causes()) {
        throw ShapeError("cause index out of range");
    }
    if (!(util.cause_space() == joint.cause_space()) ||
        !(util.effect_space() == joint.effect_space())) {
        throw ShapeError("utility table spaces do not match joint");
    }
    const auto marginal = cause_marginal(joint);
    if (marginal[j] <= 0.0 || marginal[k] <= 0.0) {
        throw DegenerateClassError("zero cause marginal in constraint residual");
    }
    const std::size_t w = joint.num_confounders();
    double total = 0.0;
    for (std::size_t lp = 0; lp < w; ++lp) {
        for (std::size_t l = 0; l < w; ++l) {
            double lhs = 0.0;
            double rhs = 0.0;
            for (std::size_t i = 0; i < joint.num_effects(); ++i) {
                lhs += util.at(j, i) * joint.iota(i, l, j);
                rhs += util.at(k, i) * joint.iota(i, l, k);
            }
            lhs *= joint.beta(k, lp) * joint.beta(j, l);
            rhs *= joint.beta(j, lp) * joint.beta(k, l);
            total += joint.gamma(lp) * joint.gamma(l) * (lhs - rhs);
        }
    }
    return total;
}

}  // namespace pcfl
