#pragma once

#include <string>

#include "wclt/chain.hpp"
#include "wclt/montecarlo.hpp"

// single-header nlohmann/json from vendor/
#include <json.hpp>

namespace wclt {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "wignerclt 0.1.0";

std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

Json json_complex(cplx v);
cplx complex_from_json(const Json& j);

// {"kind":"identity"} | {"kind":"traceless_diag_pm1","seed":..}
// | {"kind":"traceless_offdiag","seed":..} | {"kind":"file","path":..,"center":bool}
MatPtr matrix_from_json(const Json& j, int n);
Json matrix_to_json_descriptor(const Json& original, const MatPtr& m);

// {"n":.., "links":[{"z":{"re":..,"im":..},"matrix":{..}}, ...]}
Chain chain_from_json(const Json& j);
Chain chain_from_file(const std::string& path);

EnsembleConfig ensemble_from_json(const Json& j);

// validation shared by the CLI subcommands: dimension coherence, operator
// norm cap, traceless tolerance, eta floor (|Im z| >= 10/n for MC comparisons)
void validate_chain(const Chain& c, bool mc_regime, int n_mc);

Json make_manifest(const std::string& command, const Json& config, std::uint64_t seed,
                   const std::vector<std::string>& outputs);
void write_json_file(const std::string& path, const Json& j);

}  // namespace wclt
