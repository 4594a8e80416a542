#include "gvar/embeddings.hpp"

#include <cmath>

#include "gvar/errors.hpp"
#include "gvar/gamma_norms.hpp"

namespace gvar {

std::string to_string(EmbeddingDirection d)
{
    return d == EmbeddingDirection::type2 ? "type2" : "cotype2";
}

EmbeddingDirection embedding_direction_from_string(const std::string& s)
{
    if (s == "type2") return EmbeddingDirection::type2;
    if (s == "cotype2") return EmbeddingDirection::cotype2;
    throw ValidationError("unknown embedding direction '" + s + "' (expected type2 or cotype2)");
}

double l2_bochner_norm(const StepFunction& phi, const NormedSpace& X)
{
    if (phi.dim() != X.dim()) throw ValidationError("step function dimension does not match the space");
    double total = 0.0;
    for (Index n = 0; n < phi.atoms(); ++n) total += phi.space().weight(n) * X.squared_norm(phi.value(n));
    return std::sqrt(total);
}

TrialRatio embedding_ratio(const StepFunction& phi, const NormedSpace& X, const RandomStream& stream,
                           std::uint64_t samples)
{
    TrialRatio t;
    const auto report = gamma_variation_norm(measure_from_density(phi), X, stream, samples,
                                             {SearchMode::fast_path, false});
    t.gamma_norm = report.norm;
    t.bochner_norm = l2_bochner_norm(phi, X);
    if (t.bochner_norm > 0.0) {
        t.ratio = t.gamma_norm / t.bochner_norm;
        if (report.norm > 0.0)
            t.std_error = report.estimate.std_error / (2.0 * report.norm * t.bochner_norm);
    }
    return t;
}

StepFunction random_step_function(Index dim, Index atoms, const RandomStream& stream)
{
    RandomEngine engine(stream);
    Eigen::VectorXd weights(atoms);
    for (Index n = 0; n < atoms; ++n) {
        double e = 0.0;
        while (!(e > 0.0)) e = engine.exponential();
        weights(n) = e;
    }
    weights /= weights.sum();
    Eigen::MatrixXd values(dim, atoms);
    engine.fill_normal(values);
    return {AtomPartition(std::move(weights)), std::move(values)};
}

EmbeddingReport run_embedding_trials(EmbeddingDirection direction, const NormedSpace& X, Index atoms,
                                     std::size_t trials, const RandomStream& stream,
                                     std::uint64_t samples)
{
    const double p = X.exponent();
    if (direction == EmbeddingDirection::type2 && !(p >= 2.0))
        throw ValidationError("type2 trials need an l_p space with p >= 2, got " + X.name());
    if (direction == EmbeddingDirection::cotype2 && !(p <= 2.0))
        throw ValidationError("cotype2 trials need an l_p space with p <= 2, got " + X.name());
    if (trials < 1) throw ValidationError("embedding experiment needs at least one trial");

    EmbeddingReport r;
    r.direction = direction;
    r.space = X;
    r.atoms = atoms;
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto trial_stream = stream.substream(t);
        const auto phi = random_step_function(X.dim(), atoms, trial_stream.substream(0));
        r.trials.push_back(embedding_ratio(phi, X, trial_stream.substream(1), samples));
        const double ratio = r.trials.back().ratio;
        sum += ratio;
        const bool worse = direction == EmbeddingDirection::type2 ? ratio > r.worst_ratio
                                                                  : ratio < r.worst_ratio;
        if (t == 0 || worse) {
            r.worst_trial = t;
            r.worst_ratio = ratio;
            r.worst_std_error = r.trials.back().std_error;
        }
    }
    r.mean_ratio = sum / static_cast<double>(trials);
    return r;
}

} // namespace gvar
