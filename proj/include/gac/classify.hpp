#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gac/graph.hpp"
#include "gac/ktheory.hpp"

namespace gac {

enum class Outcome { Equivalent, NotEquivalent, Unknown };

std::string to_string(Outcome o);

struct Comparison {
    std::string invariant;
    std::string a;
    std::string b;
};

// A cited, three-valued decision.  Equivalent/NotEquivalent are only produced
// when the quoted theorem's hypotheses were verified or explicitly assumed;
// Unknown always carries an explanatory note (open problems are first-class
// outputs, never coerced to a boolean).
struct Verdict {
    Outcome result = Outcome::Unknown;
    std::string theorem;  // franks-ps | cuntz-krieger | rordam | sorensen | alps |
                          // ruiz-tomforde | nfq | number-field | finite-dimensional | dichotomy
    std::vector<Comparison> compared;
    std::vector<std::string> notes;
};

struct ClassifyOptions {
    bool assume_simple = false;
    bool assume_purely_infinite = false;
};

// Flow equivalence of the edge shifts: Bowen-Franks group plus determinant
// sign.  Requires finite, strongly connected graphs without sinks or sources;
// hypothesis violations throw HypothesisError.
Verdict flow_equivalence_decide(const Graph& g, const Graph& h);

// Morita equivalence of the graph C*-algebras, dispatched on graph class.
Verdict cstar_morita_decide(const Graph& g, const Graph& h, const ClassifyOptions& opts = {});

// Morita equivalence of the Leavitt path algebras over k.  The optional K_6
// groups feed the number-field invariant; they are caller-supplied because no
// formula for K_6 of a field is in scope.
Verdict leavitt_morita_decide(const Graph& g, const Graph& h, const FieldDescriptor& k,
                              const std::optional<AbGroup>& k6_a = std::nullopt,
                              const std::optional<AbGroup>& k6_b = std::nullopt,
                              const ClassifyOptions& opts = {});

}  // namespace gac
