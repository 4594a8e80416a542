#include "gvar/experiments/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gvar/embeddings.hpp"
#include "gvar/io.hpp"

namespace gvar::experiments {

namespace {

template <typename F>
auto field_guard(const std::string& field, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(field, e.what());
    }
}

const json* find(const json& obj, const char* key)
{
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::uint64_t as_uint(const json& v, const std::string& field)
{
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw ConfigError(field, "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> as_numbers(const json& v, const std::string& field)
{
    if (!v.is_array()) throw ConfigError(field, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(field, "must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

Eigen::MatrixXd as_vectors(const json& v, const std::string& field)
{
    if (!v.is_array() || v.empty()) throw ConfigError(field, "must be a nonempty array of vectors");
    const auto& first = v.front();
    if (!first.is_array() || first.empty()) throw ConfigError(field, "entries must be nonempty arrays");
    const auto d = static_cast<Index>(first.size());
    Eigen::MatrixXd m(d, static_cast<Index>(v.size()));
    for (std::size_t n = 0; n < v.size(); ++n) {
        const auto& col = v[n];
        const auto entry = field + "[" + std::to_string(n) + "]";
        if (!col.is_array() || static_cast<Index>(col.size()) != d)
            throw ConfigError(entry, "must have " + std::to_string(d) + " entries");
        for (Index i = 0; i < d; ++i) {
            if (!col[static_cast<std::size_t>(i)].is_number()) throw ConfigError(entry, "must hold numbers");
            m(i, static_cast<Index>(n)) = col[static_cast<std::size_t>(i)].get<double>();
        }
    }
    return m;
}

void check_values(const ExperimentConfig& c, const Eigen::MatrixXd& values, const std::string& field)
{
    if (c.partition && values.cols() != c.partition->atoms())
        throw ConfigError(field, "has " + std::to_string(values.cols()) + " vectors but the partition has " +
                                     std::to_string(c.partition->atoms()) + " atoms");
    if (c.space && values.rows() != c.space->dim())
        throw ConfigError(field, "vectors have dimension " + std::to_string(values.rows()) +
                                     " but space.dim is " + std::to_string(c.space->dim()));
    if (!values.allFinite()) throw ConfigError(field, "must be finite");
}

} // namespace

std::optional<StepFunction> ExperimentConfig::density() const
{
    if (!partition || !space) return std::nullopt;
    if (density_values) return StepFunction(*partition, *density_values);
    if (generator_seed) {
        RandomEngine engine(RandomStream{*generator_seed, 0});
        Eigen::MatrixXd values(space->dim(), partition->atoms());
        engine.fill_normal(values);
        return StepFunction(*partition, std::move(values));
    }
    return std::nullopt;
}

std::optional<VectorMeasure> ExperimentConfig::measure() const
{
    if (!partition || !space) return std::nullopt;
    if (measure_values) return VectorMeasure(*partition, *measure_values);
    if (auto phi = density()) return measure_from_density(*phi);
    return std::nullopt;
}

ExperimentConfig parse_config(const json& doc)
{
    if (!doc.is_object()) throw ConfigError("config", "must be a JSON object");
    static const std::vector<std::string> known{"partition", "space",  "input",  "document", "document_kind",
                                                "engine",    "output", "suite"};
    for (const auto& [key, value] : doc.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(key, "unknown configuration section");

    ExperimentConfig c;
    c.echo = doc;

    if (const auto* d = find(doc, "document")) {
        if (find(doc, "partition") || find(doc, "space") || find(doc, "input"))
            throw ConfigError("document", "cannot be combined with partition, space or input");
        auto parsed = field_guard("document", [&] { return io::parse_measure_document(*d); });
        c.partition = parsed.space;
        c.space = parsed.target;
        std::string kind = "measure";
        if (const auto* k = find(doc, "document_kind")) {
            if (!k->is_string()) throw ConfigError("document_kind", "must be \"measure\" or \"density\"");
            kind = k->get<std::string>();
        }
        if (kind == "measure") c.measure_values = parsed.values;
        else if (kind == "density") c.density_values = parsed.values;
        else throw ConfigError("document_kind", "must be \"measure\" or \"density\"");
    }

    if (const auto* p = find(doc, "partition")) {
        if (!p->is_object() || p->size() != 1)
            throw ConfigError("partition", "must hold exactly one of uniform, weights, boundaries");
        if (const auto* u = find(*p, "uniform")) {
            const auto n = as_uint(*u, "partition.uniform");
            c.partition = field_guard("partition.uniform", [&] { return AtomPartition::uniform(static_cast<Index>(n)); });
        } else if (const auto* w = find(*p, "weights")) {
            const auto ws = as_numbers(*w, "partition.weights");
            c.partition = field_guard("partition.weights", [&] { return AtomPartition::from_weights(ws); });
        } else if (const auto* b = find(*p, "boundaries")) {
            const auto bs = as_numbers(*b, "partition.boundaries");
            c.partition = field_guard("partition.boundaries", [&] { return AtomPartition::from_boundaries(bs); });
        } else {
            throw ConfigError("partition", "must hold exactly one of uniform, weights, boundaries");
        }
    }

    if (const auto* s = find(doc, "space")) {
        const auto* dim = find(*s, "dim");
        if (!dim) throw ConfigError("space.dim", "is required");
        const auto d = as_uint(*dim, "space.dim");
        const auto* norm = find(*s, "norm");
        if (!norm) throw ConfigError("space.norm", "is required");
        c.space = field_guard("space.norm", [&] { return io::parse_norm(*norm, static_cast<Index>(d)); });
    }

    if (const auto* in = find(doc, "input")) {
        if (!in->is_object() || in->size() != 1)
            throw ConfigError("input", "must hold exactly one of measure, density, generator_seed");
        if (const auto* m = find(*in, "measure")) c.measure_values = as_vectors(*m, "input.measure");
        else if (const auto* d = find(*in, "density")) c.density_values = as_vectors(*d, "input.density");
        else if (const auto* g = find(*in, "generator_seed")) c.generator_seed = as_uint(*g, "input.generator_seed");
        else throw ConfigError("input", "must hold exactly one of measure, density, generator_seed");
    }
    if (c.measure_values) check_values(c, *c.measure_values, "input.measure");
    if (c.density_values) check_values(c, *c.density_values, "input.density");

    if (const auto* e = find(doc, "engine")) {
        if (!e->is_object()) throw ConfigError("engine", "must be an object");
        for (const auto& [key, value] : e->items()) {
            const auto field = "engine." + key;
            if (key == "samples") c.engine.samples = as_uint(value, field);
            else if (key == "paths") c.engine.paths = static_cast<Index>(as_uint(value, field));
            else if (key == "seed") c.engine.seed = as_uint(value, field);
            else if (key == "z") {
                if (!value.is_number() || !(value.get<double>() > 0.0)) throw ConfigError(field, "must be a positive number");
                c.engine.z = value.get<double>();
            } else if (key == "search") {
                if (!value.is_string()) throw ConfigError(field, "must be a string");
                c.engine.search.mode = field_guard(field, [&] { return search_mode_from_string(value.get<std::string>()); });
            } else if (key == "include_partial") {
                if (!value.is_boolean()) throw ConfigError(field, "must be a boolean");
                c.engine.search.include_partial = value.get<bool>();
            } else {
                throw ConfigError(field, "unknown engine setting");
            }
        }
    }

    if (const auto* o = find(doc, "output")) {
        if (!o->is_object()) throw ConfigError("output", "must be an object");
        for (const auto& [key, value] : o->items()) {
            const auto field = "output." + key;
            if (!value.is_string()) throw ConfigError(field, "must be a path string");
            if (key == "report") c.output.report = value.get<std::string>();
            else if (key == "csv") c.output.csv = value.get<std::string>();
            else if (key == "svg") c.output.svg = value.get<std::string>();
            else throw ConfigError(field, "unknown output");
        }
    }

    if (const auto* s = find(doc, "suite")) {
        if (!s->is_object()) throw ConfigError("suite", "must be an object");
        c.suite = *s;
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

void apply_overrides(ExperimentConfig& config, const Overrides& overrides)
{
    if (overrides.seed) {
        config.engine.seed = *overrides.seed;
        config.echo["engine"]["seed"] = *overrides.seed;
    }
    if (overrides.samples) {
        config.engine.samples = *overrides.samples;
        config.echo["engine"]["samples"] = *overrides.samples;
    }
    if (overrides.paths) {
        config.engine.paths = *overrides.paths;
        config.echo["engine"]["paths"] = *overrides.paths;
    }
}

std::uint64_t suite_uint(const ExperimentConfig& c, const std::string& key, std::uint64_t fallback)
{
    const auto* v = find(c.suite, key.c_str());
    return v ? as_uint(*v, "suite." + key) : fallback;
}

double suite_double(const ExperimentConfig& c, const std::string& key, double fallback)
{
    const auto* v = find(c.suite, key.c_str());
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError("suite." + key, "must be a number");
    return v->get<double>();
}

std::vector<Index> suite_indices(const ExperimentConfig& c, const std::string& key, std::vector<Index> fallback)
{
    const auto* v = find(c.suite, key.c_str());
    if (!v) return fallback;
    if (!v->is_array() || v->empty()) throw ConfigError("suite." + key, "must be a nonempty array of integers");
    std::vector<Index> out;
    for (const auto& x : *v) {
        const auto n = as_uint(x, "suite." + key);
        if (n < 1) throw ConfigError("suite." + key, "entries must be positive");
        out.push_back(static_cast<Index>(n));
    }
    return out;
}

std::vector<json> suite_norms(const ExperimentConfig& c, const std::string& key, std::vector<json> fallback)
{
    const auto* v = find(c.suite, key.c_str());
    if (!v) return fallback;
    if (!v->is_array() || v->empty()) throw ConfigError("suite." + key, "must be a nonempty array of norms");
    for (const auto& x : *v) field_guard("suite." + key, [&] { return io::parse_norm(x, 1); });
    return {v->begin(), v->end()};
}

} // namespace gvar::experiments
