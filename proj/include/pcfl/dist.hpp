#ifndef PCFL_DIST_HPP
#define PCFL_DIST_HPP

#include <string>
#include <vector>

#include "pcfl/core.hpp"

namespace pcfl {

// Exact joint over (C, E, Z) factored as p(e|z,c), p(c|z), p(z).
//
// iota[e][z][c] = p(e | z, c), beta[c][z] = p(c | z), gamma[z] = p(z).
// The single confounder covers both the C<-Z->E and Z->C->E families; a
// second exogenous parent of C (Fig-1 style) is absorbed into beta.
class ConfoundedJoint {
  public:
    ConfoundedJoint(ValueSpace cause_space, ValueSpace effect_space, ValueSpace confounder_space,
                    std::vector<std::vector<std::vector<double>>> iota,
                    std::vector<std::vector<double>> beta, std::vector<double> gamma);

    const ValueSpace& cause_space() const { return cause_space_; }
    const ValueSpace& effect_space() const { return effect_space_; }
    const ValueSpace& confounder_space() const { return confounder_space_; }
    std::size_t num_causes() const { return cause_space_.size(); }
    std::size_t num_effects() const { return effect_space_.size(); }
    std::size_t num_confounders() const { return confounder_space_.size(); }

    double iota(std::size_t e, std::size_t z, std::size_t c) const { return iota_[e][z][c]; }
    double beta(std::size_t c, std::size_t z) const { return beta_[c][z]; }
    double gamma(std::size_t z) const { return gamma_[z]; }

    std::string to_json() const;
    static ConfoundedJoint from_json(const std::string& text);

  private:
    ValueSpace cause_space_;
    ValueSpace effect_space_;
    ValueSpace confounder_space_;
    std::vector<std::vector<std::vector<double>>> iota_;  // [e][z][c]
    std::vector<std::vector<double>> beta_;               // [c][z]
    std::vector<double> gamma_;                           // [z]
};

// p(e | do(c)) = sum_z iota[e][z][c] * gamma[z].
Cpt interventional_cpt(const ConfoundedJoint& joint);

// p(e | c) = sum_z iota[e][z][c] * beta[c][z] * gamma[z] / p(c).
// Rejects zero cause marginals by name rather than renormalizing silently.
Cpt observational_cpt(const ConfoundedJoint& joint);

// p(c) = sum_z beta[c][z] * gamma[z].
std::vector<double> cause_marginal(const ConfoundedJoint& joint);

// Left-minus-right of the observational expected-utility constraint between
// cause values j and k, in the polynomial form that clears the marginals:
//
//   sum_{z'} sum_z gamma[z'] gamma[z] ( sum_e u(c_j,e) iota[e][z][j] beta[k][z'] beta[j][z]
//                                     - sum_e u(c_k,e) iota[e][z][k] beta[j][z'] beta[k][z] )
//
// which equals (EU_obs(j) - EU_obs(k)) * p(c_j) * p(c_k).
double eq_constraint_residual(const ConfoundedJoint& joint, const UtilityTable& util,
                              std::size_t j, std::size_t k);

}  // namespace pcfl

#endif
