#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "droca/automaton.hpp"
#include "droca/sat.hpp"
#include "droca/table.hpp"

namespace droca {

using SymbolWord = std::vector<Symbol>;

/// Labelled words over Σ̃ ∪ Ops. Σ̃ occupies symbols 0..base_symbols-1 and
/// operation i is symbol base_symbols + i.
struct SampleSet {
  std::size_t base_symbols = 0;
  std::vector<ActionsVector> ops;
  std::vector<SymbolWord> pos, neg;

  std::size_t num_symbols() const noexcept { return base_symbols + ops.size(); }
  Symbol op_symbol(std::size_t i) const { return static_cast<Symbol>(base_symbols + i); }
};

/// Pos/Neg of the table over every cell of (P ∪ PΣ)·S. Encodings come from
/// the table's counter-value cache. Throws InvalidInput if a cell is missing.
SampleSet build_samples(const ObservationTable& table);

/// Prefix tree of the samples. Node 0 is the root.
struct Apta {
  enum class Label : std::uint8_t { None, Accept, Reject };
  struct Edge {
    std::uint32_t parent;
    Symbol symbol;
    std::uint32_t child;
  };

  std::size_t num_symbols = 0;
  std::vector<Label> labels;
  std::vector<std::map<Symbol, std::uint32_t>> children;
  std::vector<Edge> edges;  // in node-creation order

  std::size_t size() const noexcept { return labels.size(); }
};

/// Throws SampleConflict naming the word labelled both ways.
Apta build_apta(const SampleSet& samples);
Apta build_apta(std::size_t num_symbols, const std::vector<SymbolWord>& pos, const std::vector<SymbolWord>& neg);

struct EncodeOptions {
  // Also forbid node t (in breadth-first order) from using a color above t.
  bool bfs_symmetry = false;
};

/// Satisfiable iff some complete n-state DFA is consistent with the APTA.
CnfInstance encode_size_n(const Apta& apta, std::size_t n, EncodeOptions options = {});

/// Reads the DFA off a model of encode_size_n(apta, n).
Dfa decode_dfa(const CnfInstance& cnf, const Assignment& model, std::size_t n, std::size_t num_symbols);

struct MinDfaOptions {
  SatBackendConfig backend;
  Deadline deadline;
  EncodeOptions encode;
};

struct MinDfaResult {
  Dfa dfa;
  std::size_t sat_calls = 0;
};

/// Tries n = 1, 2, ... and returns the first DFA found, after checking it
/// separates the samples.
MinDfaResult find_min_sep_dfa(const SampleSet& samples, const MinDfaOptions& options = {});
MinDfaResult find_min_sep_dfa(std::size_t num_symbols, const std::vector<SymbolWord>& pos,
                              const std::vector<SymbolWord>& neg, const MinDfaOptions& options = {});

/// Keeps only symbols 0..base_symbols-1.
Dfa strip_operations(const Dfa& dfa, std::size_t base_symbols);

}  // namespace droca
