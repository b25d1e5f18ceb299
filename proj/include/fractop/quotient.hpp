#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fractop/analysis.hpp"
#include "fractop/attractor.hpp"

namespace fractop {

// Words over {1, 2} code points of the Cantor middle-third set: symbol 1 is
// ternary digit 0, symbol 2 is ternary digit 2. The value is the left end of
// the word's cylinder.
Rational code_value(const Address& word);

std::vector<Address> all_words(std::size_t depth, std::uint32_t symbols = 2);

// Depth-k partition of the code words into classes.
class Decomposition {
 public:
  enum class Kind { Trivial, Collapse };

  static Decomposition trivial(std::size_t depth);
  // f = identity on the cylinder Y = [y_prefix], everything else sent to q.
  static Decomposition collapse(std::size_t depth, Address y_prefix, Address q);

  std::size_t depth() const { return depth_; }
  Kind kind() const { return kind_; }
  const Address& y_prefix() const { return y_prefix_; }
  const Address& q() const { return q_; }

  // Classes ordered by representative; members sorted.
  const std::vector<std::vector<Address>>& classes() const { return classes_; }
  std::size_t class_count() const { return classes_.size(); }
  // The unique member inside Y (the word itself for the trivial kind).
  const Address& representative(std::size_t cls) const { return reps_[cls]; }
  std::size_t class_of(const Address& word) const;
  bool in_y(const Address& word) const { return word.starts_with(y_prefix_); }

  // Same construction one symbol deeper; q is extended by symbol 1 (same point).
  Decomposition refine() const;

 private:
  Decomposition(std::size_t depth, Kind kind, Address y_prefix, Address q,
                std::vector<std::vector<Address>> classes);

  std::size_t depth_;
  Kind kind_;
  Address y_prefix_;
  Address q_;
  std::vector<std::vector<Address>> classes_;
  std::vector<Address> reps_;
  std::vector<std::size_t> word_class_;  // indexed by word rank
};

Address default_q(std::size_t depth, const Address& y_prefix);

Decomposition build_collapse_quotient(std::size_t depth, const Address& y_prefix = Address({1}),
                                      std::optional<Address> q = std::nullopt);

// Pushforward metric rho(c, c') = |value(rep c) - value(rep c')|.
Rational class_distance(const Decomposition& d, std::size_t a, std::size_t b);

// Exhaustive check of the metric axioms for rho; returns the number of violations.
std::size_t metric_axiom_violations(const Decomposition& d);

struct HomeomorphismReport {
  std::size_t depth = 0;
  std::size_t y_word_count = 0;
  std::size_t class_count = 0;
  bool bijective = false;
  bool lipschitz_ratio_one = false;  // rho(h w, h w') == d(w, w') on every pair
  std::size_t pairs_checked = 0;
  std::vector<std::pair<Address, std::size_t>> bijection;  // Y word -> class index
  std::vector<std::vector<Rational>> y_metric;             // depth <= 6 only
  std::vector<std::vector<Rational>> class_metric;         // depth <= 6 only
  bool passed() const { return bijective && lipschitz_ratio_one; }
};

HomeomorphismReport verify_quotient_homeomorphism(const Decomposition& d);

// q_j = g o f_j o g^-1 as a table: class index at depth k -> class index of d.refine().
std::vector<std::size_t> induced_map(const Decomposition& d, std::uint32_t j);

struct SelfSimilarityReport {
  std::size_t depth = 0;
  std::size_t code_depth = 0;  // depth of the code words g pulls classes back to
  bool conjugacy_bijective = false;
  bool round_trip_identity = false;
  bool contraction_ok = false;
  std::size_t pairs_checked = 0;
  Rational worst_ratio = 0;  // max rho(q c, q c') / rho(c, c') over pairs
  Rational contraction_bound = 0;
  bool covering_ok = false;
  std::size_t refined_class_count = 0;
  bool passed() const { return conjugacy_bijective && round_trip_identity && contraction_ok && covering_ok; }
};

SelfSimilarityReport conjugate_selfsimilarity_check(const Decomposition& d);

struct NontrivialityReport {
  bool nontrivial = false;
  std::vector<Address> witness;
};

NontrivialityReport nontriviality_check(const Decomposition& d);

enum class SpaceKind { YCylinder, Decomposition };

struct ConjugacyReport {
  SpaceKind kind = SpaceKind::YCylinder;
  std::size_t depth = 0;
  std::size_t code_depth = 0;
  bool bijective = false;
  Rational expansion = 1;  // d(image) = expansion * d(source) on every pair
  bool exact_scaling = false;
  std::size_t pairs_checked = 0;
  bool passed() const { return bijective && exact_scaling; }
};

// Shift conjugacy of the cylinder [y_prefix] (empty prefix: identity on the full space).
ConjugacyReport homeo_to_cmts_check(std::size_t depth, const Address& y_prefix);
// Composed conjugacy g^-1 of a collapse decomposition.
ConjugacyReport homeo_to_cmts_check(const Decomposition& d);

struct QuotientIteration {
  std::size_t index = 0;
  Decomposition decomposition;
  HomeomorphismReport homeomorphism;
  NontrivialityReport nontriviality;
  SelfSimilarityReport self_similarity;
  ConjugacyReport conjugacy;
  bool quotient_of_previous = false;
  PropertyReport realization;  // profile of the code space D_i is conjugate to
  bool passed() const;
};

// D_0 = code space at depth k; each D_i is a collapse quotient of D_{i-1}
// re-expressed on code words through the verified conjugacy.
std::vector<QuotientIteration> iterate_quotients(std::size_t n, std::size_t k, const Address& y_prefix = Address({1}),
                                                 std::optional<Address> q = std::nullopt);

std::string format_decomposition(const Decomposition& d);
std::string format_quotient_run(const std::vector<QuotientIteration>& run, ReportFormat format);

}  // namespace fractop
