#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wlp/kernel.hpp"
#include "wlp/semiring.hpp"

namespace wlp {

// Program texts shared by fixtures and tests.
namespace programs {
std::string_view reachability();         // reachable/1 over initial and edge
std::string_view fsa_paths();            // goal over every path of a labelled automaton
std::string_view fsa_recognition();      // goal over paths reading string/2 up to length/1
std::string_view transducer();           // paths over arc/4
std::string_view transducer_order2();    // paths over biarc/5, state pairs
std::string_view cky();                  // CNF parsing over unary/binary/start
std::string_view cky_epsilon();          // CKY with X -> eps productions via pos/1
std::string_view transduction_grammar(); // synchronous CKY over two strings, straight only
std::string_view inversion_rule();       // the inverted combination for the above
std::string_view trigram();              // trigram prediction from a seed predict/3
std::string_view monotone();             // monotone phrase decoding
std::string_view phrase_translation();   // monotone decoding scored by a trigram model
}  // namespace programs

// string(i, w) for each word (1-based) plus length(n).
std::vector<Axiom> sentence_facts(const std::vector<std::string>& words, const std::string& string_pred = "string",
                                  const std::string& length_pred = "length");

enum class Basis {
  Stated,   // value recorded with the fixture
  Derived,  // computed by an oracle in the tests; no stored value
};

struct Expectation {
  SemiringId semiring;
  std::string atom;
  std::optional<Value> value;  // absent for Derived
  double tolerance = 1e-12;
  Basis basis = Basis::Derived;
  std::string note;
};

struct FactorData {
  Program program;
  std::vector<Axiom> facts;
  // Rules and facts in one program.
  Program combined() const;
};

struct Fixture {
  std::string name;
  std::string description;
  FactorData main;
  std::optional<FactorData> partner;  // the second factor for pairwise fixtures
  std::vector<Expectation> expectations;

  Program combined() const { return main.combined(); }
};

std::vector<Fixture> build_graph_fixtures();
std::vector<Fixture> build_fsa_fixtures();
std::vector<Fixture> build_grammar_fixtures();
std::vector<Fixture> build_translation_fixtures();
std::vector<Fixture> build_misc_fixtures();

// Every fixture, built once.
const std::vector<Fixture>& all_fixtures();
// Throws Error for an unknown name.
const Fixture& fixture(std::string_view name);

}  // namespace wlp
