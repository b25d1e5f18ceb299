#include "fractop/quotient.hpp"

#include <algorithm>
#include <sstream>

#include "fractop/error.hpp"
#include "json.hpp"

namespace fractop {

namespace {

constexpr std::size_t kMaxWordDepth = 24;

std::size_t word_rank(const Address& w) {
  std::size_t r = 0;
  for (auto s : w.symbols()) r = (r << 1) | (s - 1);
  return r;
}

void check_word(const Address& w, std::size_t depth, const std::string& what) {
  require(w.depth() == depth, what + " '" + w.str() + "' must have depth " + std::to_string(depth));
  for (auto s : w.symbols()) require(s == 1 || s == 2, what + " '" + w.str() + "' has a symbol outside {1, 2}");
}

Rational third() { return Rational(1, 3); }

}  // namespace

Rational code_value(const Address& word) {
  Rational v = 0;
  Rational scale = 1;
  for (auto s : word.symbols()) {
    scale *= third();
    if (s == 2) v += 2 * scale;
  }
  return v;
}

std::vector<Address> all_words(std::size_t depth, std::uint32_t symbols) {
  require(symbols >= 1, "alphabet must be non-empty");
  std::vector<Address> out{Address()};
  for (std::size_t i = 0; i < depth; ++i) {
    std::vector<Address> next;
    next.reserve(out.size() * symbols);
    for (const auto& w : out) {
      for (std::uint32_t s = 1; s <= symbols; ++s) next.push_back(w.append(s));
    }
    out = std::move(next);
  }
  return out;
}

// ---- Decomposition ---------------------------------------------------------

Decomposition::Decomposition(std::size_t depth, Kind kind, Address y_prefix, Address q,
                             std::vector<std::vector<Address>> classes)
    : depth_(depth), kind_(kind), y_prefix_(std::move(y_prefix)), q_(std::move(q)) {
  require(depth_ <= kMaxWordDepth, "decomposition depth above " + std::to_string(kMaxWordDepth));
  for (auto& c : classes) std::sort(c.begin(), c.end());

  // Representative: the unique member in Y.
  std::vector<std::pair<Address, std::vector<Address>>> keyed;
  for (auto& c : classes) {
    require(!c.empty(), "empty class");
    std::optional<Address> rep;
    for (const auto& w : c) {
      check_word(w, depth_, "word");
      if (in_y(w)) {
        require(!rep, "class holds two points of Y");
        rep = w;
      }
    }
    require(rep.has_value(), "class has no point of Y");
    keyed.emplace_back(*rep, std::move(c));
  }
  std::sort(keyed.begin(), keyed.end());

  const std::size_t total = std::size_t{1} << depth_;
  word_class_.assign(total, static_cast<std::size_t>(-1));
  std::size_t covered = 0, non_singleton = 0;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    reps_.push_back(keyed[i].first);
    classes_.push_back(std::move(keyed[i].second));
    if (classes_.back().size() > 1) ++non_singleton;
    for (const auto& w : classes_.back()) {
      auto& slot = word_class_[word_rank(w)];
      require(slot == static_cast<std::size_t>(-1), "classes overlap at word " + w.str());
      slot = i;
      ++covered;
    }
  }
  require(covered == total, "classes do not cover all words");
  if (kind_ == Kind::Trivial) {
    require(non_singleton == 0, "trivial decomposition with a non-singleton class");
  } else {
    require(non_singleton == 1, "collapse decomposition needs exactly one non-singleton class");
  }
}

Decomposition Decomposition::trivial(std::size_t depth) {
  std::vector<std::vector<Address>> classes;
  for (auto& w : all_words(depth)) classes.push_back({std::move(w)});
  return Decomposition(depth, Kind::Trivial, Address(), Address(), std::move(classes));
}

Decomposition Decomposition::collapse(std::size_t depth, Address y_prefix, Address q) {
  require(!y_prefix.empty(), "Y cylinder prefix must be non-empty");
  require(y_prefix.depth() <= depth, "Y cylinder prefix is longer than the depth");
  check_word(y_prefix, y_prefix.depth(), "Y prefix");
  check_word(q, depth, "q");
  require(q.starts_with(y_prefix), "q = " + q.str() + " is not in Y = [" + y_prefix.str() + "]");

  std::vector<std::vector<Address>> classes;
  std::vector<Address> fiber{q};
  for (auto& w : all_words(depth)) {
    if (w == q) continue;
    if (w.starts_with(y_prefix)) {
      classes.push_back({std::move(w)});
    } else {
      fiber.push_back(std::move(w));
    }
  }
  classes.push_back(std::move(fiber));
  return Decomposition(depth, Kind::Collapse, std::move(y_prefix), std::move(q), std::move(classes));
}

std::size_t Decomposition::class_of(const Address& word) const {
  check_word(word, depth_, "word");
  return word_class_[word_rank(word)];
}

Decomposition Decomposition::refine() const {
  if (kind_ == Kind::Trivial) return trivial(depth_ + 1);
  return collapse(depth_ + 1, y_prefix_, q_.append(1));
}

Address default_q(std::size_t depth, const Address& y_prefix) {
  Address q = y_prefix;
  while (q.depth() < depth) q = q.append(1);
  return q;
}

Decomposition build_collapse_quotient(std::size_t depth, const Address& y_prefix, std::optional<Address> q) {
  return Decomposition::collapse(depth, y_prefix, q ? *q : default_q(depth, y_prefix));
}

Rational class_distance(const Decomposition& d, std::size_t a, std::size_t b) {
  return fractop::abs(Rational(code_value(d.representative(a)) - code_value(d.representative(b))));
}

std::size_t metric_axiom_violations(const Decomposition& d) {
  const std::size_t n = d.class_count();
  std::vector<std::vector<Rational>> rho(n, std::vector<Rational>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) rho[a][b] = class_distance(d, a, b);
  }
  std::size_t bad = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (rho[a][b] < 0) ++bad;
      if ((rho[a][b] == 0) != (a == b)) ++bad;
      if (rho[a][b] != rho[b][a]) ++bad;
      for (std::size_t c = 0; c < n; ++c) {
        if (rho[a][c] > rho[a][b] + rho[b][c]) ++bad;
      }
    }
  }
  return bad;
}

// ---- homeomorphism h: Y -> D_f ---------------------------------------------

HomeomorphismReport verify_quotient_homeomorphism(const Decomposition& d) {
  require(d.kind() == Decomposition::Kind::Collapse, "homeomorphism check needs a collapse decomposition");
  HomeomorphismReport r;
  r.depth = d.depth();
  r.class_count = d.class_count();

  std::vector<Address> y;
  for (auto& w : all_words(d.depth())) {
    if (d.in_y(w)) y.push_back(std::move(w));
  }
  r.y_word_count = y.size();
  std::vector<std::size_t> image;
  std::vector<char> hit(d.class_count(), 0);
  bool injective = true;
  for (const auto& w : y) {
    auto c = d.class_of(w);
    if (hit[c]) injective = false;
    hit[c] = 1;
    image.push_back(c);
    r.bijection.emplace_back(w, c);
  }
  r.bijective = injective && std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; });

  std::vector<Rational> value;
  for (const auto& w : y) value.push_back(code_value(w));
  r.lipschitz_ratio_one = true;
  const bool tables = d.depth() <= 6;
  if (tables) {
    r.y_metric.assign(y.size(), std::vector<Rational>(y.size()));
    r.class_metric.assign(y.size(), std::vector<Rational>(y.size()));
  }
  for (std::size_t a = 0; a < y.size(); ++a) {
    for (std::size_t b = 0; b < y.size(); ++b) {
      Rational dy = fractop::abs(Rational(value[a] - value[b]));
      Rational rho = class_distance(d, image[a], image[b]);
      if (a < b) {
        ++r.pairs_checked;
        if (dy != rho) r.lipschitz_ratio_one = false;
      }
      if (tables) {
        r.y_metric[a][b] = dy;
        r.class_metric[image[a]][image[b]] = rho;
      }
    }
  }
  return r;
}

// ---- self-similarity through the conjugacy g = h o sigma^-1 ----------------

std::vector<std::size_t> induced_map(const Decomposition& d, std::uint32_t j) {
  require(j == 1 || j == 2, "map index must be 1 or 2");
  const auto refined = d.refine();
  const auto& prefix = d.y_prefix();
  std::vector<std::size_t> table;
  table.reserve(d.class_count());
  for (std::size_t c = 0; c < d.class_count(); ++c) {
    Address code = d.representative(c).drop_front(prefix.depth());  // g^-1
    Address image = code.prepend(j);                                 // f_j
    Address word = prefix;                                           // g (one symbol deeper)
    for (auto s : image.symbols()) word = word.append(s);
    table.push_back(refined.class_of(word));
  }
  return table;
}

SelfSimilarityReport conjugate_selfsimilarity_check(const Decomposition& d) {
  require(d.kind() == Decomposition::Kind::Collapse, "self-similarity check needs a collapse decomposition");
  const std::size_t required = d.y_prefix().depth() + 1;
  require(d.depth() >= required,
          "depth " + std::to_string(d.depth()) + " too small to resolve images: need depth >= " + std::to_string(required));
  SelfSimilarityReport r;
  r.depth = d.depth();
  r.code_depth = d.depth() - d.y_prefix().depth();

  // g on code words, g^-1 on classes.
  const auto codes = all_words(r.code_depth);
  std::vector<char> hit(d.class_count(), 0);
  bool injective = true, round_trip = true;
  for (const auto& v : codes) {
    Address w = d.y_prefix();
    for (auto s : v.symbols()) w = w.append(s);
    auto c = d.class_of(w);
    if (hit[c]) injective = false;
    hit[c] = 1;
    if (d.representative(c).drop_front(d.y_prefix().depth()) != v) round_trip = false;
  }
  r.conjugacy_bijective = injective && codes.size() == d.class_count() &&
                          std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; });
  for (std::size_t c = 0; c < d.class_count(); ++c) {
    Address w = d.y_prefix();
    const Address code = d.representative(c).drop_front(d.y_prefix().depth());
    for (auto s : code.symbols()) w = w.append(s);
    if (d.class_of(w) != c) round_trip = false;
  }
  r.round_trip_identity = round_trip;

  const auto refined = d.refine();
  const auto cmts = preset("cmts");
  r.refined_class_count = refined.class_count();
  r.contraction_ok = true;
  std::vector<std::size_t> image_hits(refined.class_count(), 0);
  for (std::uint32_t j = 1; j <= 2; ++j) {
    const Rational bound = cmts->maps()[j - 1].lipschitz();
    r.contraction_bound = std::max(r.contraction_bound, bound);
    auto table = induced_map(d, j);
    for (auto img : table) ++image_hits[img];
    for (std::size_t a = 0; a < d.class_count(); ++a) {
      for (std::size_t b = a + 1; b < d.class_count(); ++b) {
        Rational before = class_distance(d, a, b);
        Rational after = class_distance(refined, table[a], table[b]);
        ++r.pairs_checked;
        if (after > bound * before) r.contraction_ok = false;
        if (before > 0) r.worst_ratio = std::max(r.worst_ratio, Rational(after / before));
      }
    }
  }
  r.covering_ok = std::all_of(image_hits.begin(), image_hits.end(), [](std::size_t h) { return h == 1; });
  return r;
}

NontrivialityReport nontriviality_check(const Decomposition& d) {
  for (const auto& c : d.classes()) {
    if (c.size() >= 2) return {true, c};
  }
  return {false, {}};
}

// ---- conjugacies to the code space -----------------------------------------

namespace {

ConjugacyReport scaling_check(SpaceKind kind, std::size_t depth, std::size_t shift,
                              const std::vector<Rational>& source_values, const std::vector<Address>& targets) {
  ConjugacyReport r;
  r.kind = kind;
  r.depth = depth;
  r.code_depth = depth - shift;
  r.expansion = rational_pow(Rational(3), static_cast<unsigned>(shift));

  const std::size_t total = std::size_t{1} << r.code_depth;
  std::vector<char> hit(total, 0);
  bool injective = true;
  for (const auto& t : targets) {
    auto rank = word_rank(t);
    if (hit[rank]) injective = false;
    hit[rank] = 1;
  }
  r.bijective = injective && targets.size() == total;

  std::vector<Rational> target_values;
  for (const auto& t : targets) target_values.push_back(code_value(t));
  r.exact_scaling = true;
  for (std::size_t a = 0; a < targets.size(); ++a) {
    for (std::size_t b = a + 1; b < targets.size(); ++b) {
      ++r.pairs_checked;
      Rational src = fractop::abs(Rational(source_values[a] - source_values[b]));
      Rational dst = fractop::abs(Rational(target_values[a] - target_values[b]));
      if (dst != r.expansion * src) r.exact_scaling = false;
    }
  }
  return r;
}

}  // namespace

ConjugacyReport homeo_to_cmts_check(std::size_t depth, const Address& y_prefix) {
  require(y_prefix.depth() <= depth, "cylinder prefix longer than depth");
  require(depth <= kMaxWordDepth, "depth above " + std::to_string(kMaxWordDepth));
  std::vector<Rational> values;
  std::vector<Address> targets;
  for (const auto& w : all_words(depth)) {
    if (!w.starts_with(y_prefix)) continue;
    values.push_back(code_value(w));
    targets.push_back(w.drop_front(y_prefix.depth()));  // sigma^L
  }
  return scaling_check(SpaceKind::YCylinder, depth, y_prefix.depth(), values, targets);
}

ConjugacyReport homeo_to_cmts_check(const Decomposition& d) {
  require(d.kind() == Decomposition::Kind::Collapse,
          "unsupported space kind: only cylinders and collapse decompositions are conjugated");
  std::vector<Rational> values;
  std::vector<Address> targets;
  for (std::size_t c = 0; c < d.class_count(); ++c) {
    values.push_back(code_value(d.representative(c)));
    targets.push_back(d.representative(c).drop_front(d.y_prefix().depth()));
  }
  return scaling_check(SpaceKind::Decomposition, d.depth(), d.y_prefix().depth(), values, targets);
}

// ---- iteration -------------------------------------------------------------

bool QuotientIteration::passed() const {
  return homeomorphism.passed() && nontriviality.nontrivial && self_similarity.passed() && conjugacy.passed() &&
         quotient_of_previous && realization.zero_dim_evidence && realization.perfect_proxy;
}

namespace {

// Do the classes of `next`, pulled back along `pull`, partition `count` items?
template <class Pull>
bool partitions(const Decomposition& next, std::size_t count, Pull pull) {
  std::vector<char> seen(count, 0);
  std::size_t covered = 0;
  for (const auto& cls : next.classes()) {
    for (const auto& w : cls) {
      auto item = pull(w);
      if (item >= count || seen[item]) return false;
      seen[item] = 1;
      ++covered;
    }
  }
  return covered == count;
}

}  // namespace

std::vector<QuotientIteration> iterate_quotients(std::size_t n, std::size_t k, const Address& y_prefix,
                                                 std::optional<Address> q) {
  require(n >= 1, "iterate_quotients needs at least one iteration");
  require(!y_prefix.empty(), "Y cylinder prefix must be non-empty");
  const std::size_t shift = y_prefix.depth();
  const std::size_t required = n * shift + 1;
  require(k >= required, "depth " + std::to_string(k) + " too small for " + std::to_string(n) +
                             " quotient iterations: need depth >= " + std::to_string(required));
  if (q) check_word(*q, k, "q");

  const auto cmts = preset("cmts");
  std::vector<QuotientIteration> run;
  std::optional<Decomposition> prev;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t depth = k - (i - 1) * shift;
    auto d = build_collapse_quotient(depth, y_prefix, q ? std::optional(q->prefix(depth)) : std::nullopt);

    bool quotient_of_previous;
    if (!prev) {
      quotient_of_previous = partitions(d, std::size_t{1} << depth, word_rank);
    } else {
      // Code word v of D_i stands for the class g_{i-1}(v) of D_{i-1}.
      const Decomposition& p = *prev;
      quotient_of_previous = partitions(d, p.class_count(), [&](const Address& v) {
        Address w = y_prefix;
        for (auto s : v.symbols()) w = w.append(s);
        return p.class_of(w);
      });
    }

    QuotientIteration it{
        .index = i,
        .decomposition = d,
        .homeomorphism = verify_quotient_homeomorphism(d),
        .nontriviality = nontriviality_check(d),
        .self_similarity = conjugate_selfsimilarity_check(d),
        .conjugacy = homeo_to_cmts_check(d),
        .quotient_of_previous = quotient_of_previous,
        .realization = analyze(cmts, depth - shift),
    };
    run.push_back(std::move(it));
    prev = std::move(d);
  }
  return run;
}

// ---- text ------------------------------------------------------------------

std::string format_decomposition(const Decomposition& d) {
  std::ostringstream os;
  os << "depth " << d.depth() << '\n';
  if (d.kind() == Decomposition::Kind::Trivial) {
    os << "kind trivial\n";
  } else {
    os << "kind collapse\n";
    os << "y_prefix " << d.y_prefix().str() << '\n';
    os << "q " << d.q().str() << '\n';
  }
  os << "classes " << d.class_count() << '\n';
  for (const auto& c : d.classes()) {
    os << "class";
    for (const auto& w : c) os << ' ' << w.str();
    os << '\n';
  }
  return os.str();
}

namespace {

using nlohmann::ordered_json;

std::string tf(bool b) { return b ? "true" : "false"; }

ordered_json iteration_json(const QuotientIteration& it) {
  ordered_json j;
  const auto& d = it.decomposition;
  j["iteration"] = it.index;
  j["depth"] = d.depth();
  j["y_prefix"] = d.y_prefix().str();
  j["q"] = d.q().str();
  j["class_count"] = d.class_count();
  ordered_json classes = ordered_json::array();
  for (const auto& c : d.classes()) {
    ordered_json members = ordered_json::array();
    for (const auto& w : c) members.push_back(w.str());
    classes.push_back(members);
  }
  j["classes"] = classes;
  const auto& h = it.homeomorphism;
  j["homeomorphism"] = {{"y_word_count", h.y_word_count},
                        {"class_count", h.class_count},
                        {"bijective", h.bijective},
                        {"lipschitz_ratio_one", h.lipschitz_ratio_one},
                        {"pairs_checked", h.pairs_checked},
                        {"closed_map", "automatic (continuous map between compact metric spaces)"}};
  ordered_json witness = ordered_json::array();
  for (const auto& w : it.nontriviality.witness) witness.push_back(w.str());
  j["nontrivial"] = {{"nontrivial", it.nontriviality.nontrivial}, {"witness", witness}};
  const auto& s = it.self_similarity;
  j["self_similarity"] = {{"code_depth", s.code_depth},
                          {"conjugacy_bijective", s.conjugacy_bijective},
                          {"round_trip_identity", s.round_trip_identity},
                          {"contraction_bound", to_string(s.contraction_bound)},
                          {"worst_ratio", to_string(s.worst_ratio)},
                          {"contraction_ok", s.contraction_ok},
                          {"pairs_checked", s.pairs_checked},
                          {"covering_ok", s.covering_ok},
                          {"refined_class_count", s.refined_class_count}};
  const auto& c = it.conjugacy;
  j["conjugacy_to_code_space"] = {{"code_depth", c.code_depth},
                                  {"bijective", c.bijective},
                                  {"expansion", to_string(c.expansion)},
                                  {"exact_scaling", c.exact_scaling},
                                  {"pairs_checked", c.pairs_checked}};
  j["quotient_of_previous"] = it.quotient_of_previous;
  j["realization"] = {{"level", it.realization.level},
                      {"component_count", it.realization.component_count},
                      {"perfect_proxy", it.realization.perfect_proxy},
                      {"zero_dim_evidence", it.realization.zero_dim_evidence}};
  j["passed"] = it.passed();
  return j;
}

}  // namespace

std::string format_quotient_run(const std::vector<QuotientIteration>& run, ReportFormat format) {
  if (format == ReportFormat::Json) {
    ordered_json arr = ordered_json::array();
    for (const auto& it : run) arr.push_back(iteration_json(it));
    ordered_json top;
    top["iterations"] = arr;
    top["all_passed"] = std::all_of(run.begin(), run.end(), [](const auto& it) { return it.passed(); });
    return top.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& it : run) {
    const auto& d = it.decomposition;
    os << "[iteration " << it.index << "]\n";
    os << format_decomposition(d);
    os << "homeomorphism_bijective: " << tf(it.homeomorphism.bijective) << '\n';
    os << "homeomorphism_lipschitz_ratio_one: " << tf(it.homeomorphism.lipschitz_ratio_one) << '\n';
    os << "homeomorphism_pairs_checked: " << it.homeomorphism.pairs_checked << '\n';
    os << "closed_map: automatic (continuous map between compact metric spaces)\n";
    os << "nontrivial: " << tf(it.nontriviality.nontrivial) << '\n';
    os << "nontrivial_witness:";
    for (const auto& w : it.nontriviality.witness) os << ' ' << w.str();
    os << '\n';
    const auto& s = it.self_similarity;
    os << "selfsim_code_depth: " << s.code_depth << '\n';
    os << "selfsim_conjugacy_bijective: " << tf(s.conjugacy_bijective) << '\n';
    os << "selfsim_round_trip_identity: " << tf(s.round_trip_identity) << '\n';
    os << "selfsim_contraction_bound: " << to_string(s.contraction_bound) << '\n';
    os << "selfsim_worst_ratio: " << to_string(s.worst_ratio) << '\n';
    os << "selfsim_contraction_ok: " << tf(s.contraction_ok) << '\n';
    os << "selfsim_covering_ok: " << tf(s.covering_ok) << '\n';
    os << "conjugacy_bijective: " << tf(it.conjugacy.bijective) << '\n';
    os << "conjugacy_expansion: " << to_string(it.conjugacy.expansion) << '\n';
    os << "conjugacy_exact_scaling: " << tf(it.conjugacy.exact_scaling) << '\n';
    os << "quotient_of_previous: " << tf(it.quotient_of_previous) << '\n';
    os << "realization_components: " << it.realization.component_count << '\n';
    os << "realization_perfect_proxy: " << tf(it.realization.perfect_proxy) << '\n';
    os << "realization_zero_dim_evidence: " << tf(it.realization.zero_dim_evidence) << '\n';
    os << "passed: " << tf(it.passed()) << '\n';
  }
  return os.str();
}

}  // namespace fractop
