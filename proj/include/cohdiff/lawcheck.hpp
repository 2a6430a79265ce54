// Randomized law checking: generators, the diagram registry and reports.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cohdiff/arrow.hpp"
#include "cohdiff/space.hpp"

namespace cohdiff {

struct GenParams {
  int web_size = 4;
  Kind kind = Kind::Coh;
};

/// Base space with atoms a, b, c, ... of exactly params.web_size atoms.
/// COH: random symmetric coherence, reflexive. NUCS: random disjoint strict relations.
Space gen_space(std::uint64_t seed, const GenParams& params);

/// A random clique of X ⊸ Y over the enumerated webs (greedy, each candidate kept with
/// probability `density` when coherent with the pairs already chosen).
Rel gen_morphism(std::mt19937_64& rng, const Space& x, const Space& y, const Budget& b,
                 double density = 0.5);

/// A pair accepted by witness(): (f, 0), (π0∘g, π1∘g) for a random g : X -> S Y, or a
/// rejection-sampled pair of random morphisms.
std::pair<Rel, Rel> gen_summable_pair(std::mt19937_64& rng, const Space& x, const Space& y,
                                      const Budget& b);

struct Mutation {
  bool drop_dpartial_pair = false;  // ∂_E loses ([1·a], 1·[a]) for the first atom a of E
};

/// State handed to a diagram builder for one trial.
struct DiagramCtx {
  Kind kind;
  Budget budget;
  std::mt19937_64* rng;
  Mutation mutation;
  std::vector<Space> objects;

  const Space& x(std::size_t i) const { return objects.at(i); }
  Arrow d(const Space& e) const;  // ∂_E, mutated if requested
  Rel morphism(const Space& a, const Space& b, double density = 0.5) const;
};

/// Extra obligation: `arrow`, restricted to the enumerated web of src, is a morphism src -> tgt.
struct MorphismObligation {
  std::string what;
  Space src, tgt;
  Arrow arrow;
};

struct DiagramInstance {
  Space source;
  Arrow left, right;
  int bound = 0;  // output degree bound; <= 0 means budget.max_degree
  std::vector<MorphismObligation> obligations;
};

struct DiagramSpec {
  std::string name;
  std::string group;  // entry of the completeness list
  std::string statement;
  int objects = 1;
  std::vector<Kind> kinds{Kind::Coh, Kind::Nucs, Kind::Rel};
  std::function<DiagramInstance(DiagramCtx&)> build;
};

const std::vector<DiagramSpec>& diagram_registry();
const DiagramSpec* find_diagram(const std::string& name);

/// The groups every registry must cover.
const std::vector<std::string>& required_groups();

struct Counterexample {
  int trial = 0;
  std::string input;
  std::string left_image;
  std::string right_image;
  std::string objects;
};

struct CheckReport {
  std::string diagram;
  Kind model = Kind::Coh;
  std::uint64_t seed = 0;
  int trials = 0;
  int trials_run = 0;
  bool passed = true;
  bool skipped = false;  // kind not covered by the diagram
  std::optional<Counterexample> counterexample;
  std::string error;
};

struct RunOptions {
  int trials = 100;
  Budget budget{3, 20000};
  int web_size = 4;
  std::uint64_t seed = 1;
  Mutation mutation;
};

CheckReport run_diagram(const DiagramSpec& diag, Kind model, const RunOptions& opt);

/// Runs every registered diagram (or those whose name is in `only`) in name order.
std::vector<CheckReport> run_all(Kind model, const RunOptions& opt,
                                 const std::vector<std::string>& only = {});

std::string report_line(const CheckReport& r);
std::string text_report(const std::vector<CheckReport>& rs);
std::string json_summary(const std::vector<CheckReport>& rs, const RunOptions& opt);

}  // namespace cohdiff
