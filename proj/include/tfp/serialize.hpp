#pragma once
#include <filesystem>

#include "json.hpp"
#include "tfp/gabor.hpp"
#include "tfp/metaplectic.hpp"
#include "tfp/propagators.hpp"
#include "tfp/symplectic.hpp"
#include "tfp/wavefront.hpp"
#include "tfp/weyl.hpp"

namespace tfp {

using json = nlohmann::json;

// Conversions picked up by the json constructor (json j = object;).
void to_json(json& j, const Grid1D& g);
void to_json(json& j, const PhasePoint& z);
void to_json(json& j, const SymplecticMatrix& A);
void to_json(json& j, const DecayFit& fit);
void to_json(json& j, const SectorGrid& sec);
void to_json(json& j, const WaveFrontEstimate& wf);
void to_json(json& j, const PropagatorResult& res);
void to_json(json& j, const GaborCoefficients& F);
void to_json(json& j, const SymbolGrid& sigma);

// CSV exports. Columns: signals (x, re, im); coefficients and symbols
// (x, xi, re, im); Gabor matrices (w_x, w_xi, z_x, z_xi, abs, arg);
// wave front estimates one row per sector.
void write_csv(const std::filesystem::path& file, const SampledSignal& f);
void write_csv(const std::filesystem::path& file, const GaborCoefficients& F);
void write_csv(const std::filesystem::path& file, const SymbolGrid& sigma);
void write_csv(const std::filesystem::path& file, const GaborMatrixSample& K);
void write_csv(const std::filesystem::path& file, const WaveFrontEstimate& wf);
// Dense kernel dump, one row per output grid point.
void write_kernel_csv(const std::filesystem::path& file, const WeylOperator& op);

// dump(2) with a trailing newline; parent directories are created.
void write_json(const std::filesystem::path& file, const json& j);

}  // namespace tfp
