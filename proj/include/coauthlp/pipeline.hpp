#pragma once

// Resumable pipeline stages. Each command reads the artifacts of earlier
// commands from the output directory and writes its own; a missing input
// raises MissingArtifact naming the command that produces it.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coauthlp/config.hpp"

namespace coauthlp {

struct RunFlags {
  std::string era;                   // empty = every configured era
  std::vector<std::string> methods;  // score: heuristics, embeddings, metadata
  std::optional<PromptVariant> variant;
};

/// Commands in pipeline order, excluding the helpers `synth`, `fetch-profiles` and `all`.
const std::vector<std::string>& pipeline_commands();

/// Runs one command. Throws coauthlp::Error subclasses on fatal problems.
void run_command(const std::string& command, const RunConfig& cfg, const RunFlags& flags, std::ostream& log);

/// Writes a synthetic dataset plus a desk-scale config.json into `dir`.
void write_synthetic_workspace(const std::filesystem::path& dir, std::uint64_t seed, std::size_t authors);

}  // namespace coauthlp
