#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gvar/core/measure.hpp"
#include "gvar/core/normed_space.hpp"
#include "gvar/random.hpp"

namespace gvar {

enum class EmbeddingDirection {
    type2,  ///< ||F||_{V_gamma} <= K ||phi||_{L2(mu;X)}, spaces with p >= 2
    cotype2 ///< ||phi||_{L2(mu;X)} <= K ||F||_{V_gamma}, spaces with p <= 2
};

std::string to_string(EmbeddingDirection d);
EmbeddingDirection embedding_direction_from_string(const std::string& s);

/// (sum_n mu(A_n) ||phi_n||^2)^{1/2}
double l2_bochner_norm(const StepFunction& phi, const NormedSpace& X);

struct TrialRatio {
    double gamma_norm = 0.0;   ///< ||measure_from_density(phi)||_{V_gamma}
    double bochner_norm = 0.0; ///< ||phi||_{L2(mu;X)}
    double ratio = 0.0;
    double std_error = 0.0;    ///< delta-method error of the ratio; 0 when exact
};

/// ||F||_{V_gamma} / ||phi||_{L2(mu;X)} for F = measure_from_density(phi).
TrialRatio embedding_ratio(const StepFunction& phi, const NormedSpace& X, const RandomStream& stream,
                           std::uint64_t samples);

struct EmbeddingReport {
    EmbeddingDirection direction = EmbeddingDirection::type2;
    NormedSpace space = NormedSpace::l2(1);
    Index atoms = 0;
    std::vector<TrialRatio> trials;
    std::size_t worst_trial = 0; ///< max ratio for type2, min ratio for cotype2
    double worst_ratio = 0.0;
    double worst_std_error = 0.0;
    double mean_ratio = 0.0;
};

/// Random step function for embedding trials: weights from the flat Dirichlet law
/// (normalized standard exponentials), phi_n with i.i.d. standard normal coordinates.
StepFunction random_step_function(Index dim, Index atoms, const RandomStream& stream);

/// Ratios over `trials` random step functions on X (trial t uses substream t).
/// Reports the empirical constant; asserts nothing about it.
EmbeddingReport run_embedding_trials(EmbeddingDirection direction, const NormedSpace& X, Index atoms,
                                     std::size_t trials, const RandomStream& stream,
                                     std::uint64_t samples);

} // namespace gvar
