#include "gvar/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "gvar/errors.hpp"

namespace gvar::io {

namespace {

std::vector<double> number_array(const json& doc, const char* key)
{
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw ValidationError(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

NormedSpace parse_norm(const json& norm, Index dim)
{
    if (norm.is_string()) {
        const auto s = norm.get<std::string>();
        if (s == "l1") return NormedSpace::l1(dim);
        if (s == "l2") return NormedSpace::l2(dim);
        if (s == "linf") return NormedSpace::linf(dim);
        throw ValidationError("field 'norm': unknown norm '" + s + "' (expected l1, l2, linf or {\"lp\": p})");
    }
    if (norm.is_object() && norm.contains("lp") && norm.at("lp").is_number())
        return NormedSpace::lp(dim, norm.at("lp").get<double>());
    throw ValidationError("field 'norm' must be \"l1\", \"l2\", \"linf\" or {\"lp\": p}");
}

json norm_json(const NormedSpace& X)
{
    if (X.kind() == NormKind::Lp) return json{{"lp", X.exponent()}};
    return X.name();
}

MeasureDocument parse_measure_document(const json& doc)
{
    if (!doc.is_object()) throw ValidationError("measure document must be a JSON object");
    if (!doc.contains("dim") || !doc.at("dim").is_number_integer())
        throw ValidationError("field 'dim' must be a positive integer");
    const auto dim = doc.at("dim").get<Index>();
    if (!doc.contains("norm")) throw ValidationError("field 'norm' is required");
    const NormedSpace target = parse_norm(doc.at("norm"), dim);

    std::optional<AtomPartition> space;
    if (doc.contains("boundaries")) {
        const auto b = number_array(doc, "boundaries");
        space = AtomPartition::from_boundaries(b);
        if (doc.contains("weights")) {
            const auto w = number_array(doc, "weights");
            if (static_cast<Index>(w.size()) != space->atoms())
                throw ValidationError("fields 'weights' and 'boundaries' disagree on the atom count");
            for (std::size_t n = 0; n < w.size(); ++n)
                if (std::abs(w[n] - space->weight(static_cast<Index>(n))) > AtomPartition::kSumTolerance)
                    throw ValidationError("weight " + std::to_string(n) + " differs from its interval length");
        }
    } else if (doc.contains("weights")) {
        const auto w = number_array(doc, "weights");
        space = AtomPartition::from_weights(w);
    } else {
        throw ValidationError("measure document needs 'weights' or 'boundaries'");
    }

    if (!doc.contains("values") || !doc.at("values").is_array())
        throw ValidationError("field 'values' must be an array of vectors");
    const auto& values = doc.at("values");
    if (static_cast<Index>(values.size()) != space->atoms())
        throw ValidationError("field 'values' has " + std::to_string(values.size()) + " vectors, expected " +
                              std::to_string(space->atoms()));
    Eigen::MatrixXd m(dim, space->atoms());
    for (Index n = 0; n < space->atoms(); ++n) {
        const auto& v = values.at(static_cast<std::size_t>(n));
        if (!v.is_array() || static_cast<Index>(v.size()) != dim)
            throw ValidationError("values[" + std::to_string(n) + "] must have " + std::to_string(dim) + " entries");
        for (Index i = 0; i < dim; ++i) {
            const auto& x = v.at(static_cast<std::size_t>(i));
            if (!x.is_number()) throw ValidationError("values[" + std::to_string(n) + "] must hold numbers");
            m(i, n) = x.get<double>();
        }
    }
    return {*space, target, std::move(m)};
}

json measure_document(const AtomPartition& space, const NormedSpace& target, const Eigen::MatrixXd& values)
{
    json doc;
    doc["weights"] = std::vector<double>(space.weights().data(), space.weights().data() + space.atoms());
    if (space.boundaries())
        doc["boundaries"] = std::vector<double>(space.boundaries()->data(),
                                                space.boundaries()->data() + space.boundaries()->size());
    doc["dim"] = target.dim();
    doc["norm"] = norm_json(target);
    json vals = json::array();
    for (Index n = 0; n < values.cols(); ++n) {
        json v = json::array();
        for (Index i = 0; i < values.rows(); ++i) v.push_back(values(i, n));
        vals.push_back(std::move(v));
    }
    doc["values"] = std::move(vals);
    return doc;
}

json to_json(const SumEstimate& e)
{
    return {{"value", e.value}, {"std_error", e.std_error}, {"samples", e.samples},
            {"method", to_string(e.method)}};
}

json to_json(const Grouping& g)
{
    json out = json::array();
    for (const auto& block : g.blocks()) out.push_back(block);
    return out;
}

json to_json(const NormReport& r)
{
    return {{"norm", r.norm}, {"moment", to_json(r.estimate)}, {"grouping", to_json(r.grouping)},
            {"mode", to_string(r.mode)}, {"groupings_searched", r.groupings_searched}};
}

json to_json(const Comparison& c)
{
    return {{"consistent", c.consistent}, {"gap", c.gap}, {"combined_std_error", c.combined_std_error},
            {"tolerance", c.tolerance}};
}

namespace {

constexpr std::array<char, 4> kMagic{'G', 'V', 'L', 'B'};

template <typename T>
void put_le(std::ostream& out, T value)
{
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in)
{
    std::array<unsigned char, sizeof(T)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T)))
        throw ValidationError("ensemble dump truncated");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
}

} // namespace

void write_ensemble(std::ostream& out, const BrownianEnsemble& W)
{
    constexpr auto max32 = std::numeric_limits<std::uint32_t>::max();
    if (W.paths() > max32 || W.atoms() > max32) throw ValidationError("ensemble too large for dump format");
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kEnsembleVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(W.paths()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(W.atoms()));
    for (Index m = 0; m < W.paths(); ++m)
        for (Index n = 0; n < W.atoms(); ++n) put_le<double>(out, W.increments()(m, n));
    if (!out) throw Error("failed writing ensemble dump");
}

Eigen::MatrixXd read_ensemble_increments(std::istream& in)
{
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        throw ValidationError("not an ensemble dump (bad magic)");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kEnsembleVersion)
        throw ValidationError("unsupported ensemble dump version " + std::to_string(version));
    const auto M = get_le<std::uint32_t>(in);
    const auto N = get_le<std::uint32_t>(in);
    Eigen::MatrixXd increments(M, N);
    for (Index m = 0; m < increments.rows(); ++m)
        for (Index n = 0; n < increments.cols(); ++n) increments(m, n) = get_le<double>(in);
    return increments;
}

} // namespace gvar::io
