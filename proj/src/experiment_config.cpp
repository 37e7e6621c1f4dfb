#include "nnlsm/experiment_config.hpp"

#include <fstream>
#include <sstream>

namespace nnlsm {

using nlohmann::json;

std::string RegressorConfig::row_label() const {
    if (kind == Kind::polynomial) return "poly q=" + std::to_string(degree);
    return "L=" + std::to_string(depth) + ", d_l=" + std::to_string(width);
}

std::string RegressorConfig::column_label() const {
    if (kind == Kind::polynomial) return "ls";
    return "epochs=" + std::to_string(train.epochs);
}

double ExperimentConfig::rate() const noexcept {
    return model == ModelKind::heston ? heston.rate : black_scholes.rate;
}

std::size_t ExperimentConfig::state_dim() const noexcept {
    return model == ModelKind::heston ? 2 : black_scholes.spot.size();
}

void ExperimentConfig::validate() const {
    try {
        if (model == ModelKind::heston) heston.validate();
        else black_scholes.validate();
        payoff.validate();
        payoff.check_state_dim(state_dim());
        if (model == ModelKind::heston && payoff.kind != PayoffKind::heston_put)
            throw std::invalid_argument("Heston model only supports the heston_put payoff");
        if (model == ModelKind::black_scholes && payoff.kind == PayoffKind::heston_put)
            throw std::invalid_argument("heston_put needs the Heston model");
        grid.validate();
        if (paths < 1) throw std::invalid_argument("paths must be >= 1");
        if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
        if (regressor.kind == RegressorConfig::Kind::neural) {
            NetworkShape::mlp(static_cast<int>(state_dim()), regressor.depth, regressor.width);
            regressor.train.validate();
            if (regressor.first_fit_epochs && *regressor.first_fit_epochs < 1)
                throw std::invalid_argument("first_fit_epochs must be >= 1");
        } else if (regressor.degree < 0 || !(regressor.ridge >= 0.0)) {
            throw std::invalid_argument("polynomial degree and ridge must be >= 0");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config '" + name + "': " + e.what());
    }
}

namespace {

// Scalar or array; scalars are broadcast to `dim` entries.
std::vector<double> vector_field(const json& model, const char* key, int dim) {
    const auto& v = model.at(key);
    if (v.is_number()) return std::vector<double>(static_cast<std::size_t>(dim), v.get<double>());
    auto out = v.get<std::vector<double>>();
    if (static_cast<int>(out.size()) != dim)
        throw ConfigError(std::string("model.") + key + " has " + std::to_string(out.size()) +
                          " entries, expected " + std::to_string(dim));
    return out;
}

int model_dimension(const json& model) {
    if (model.contains("dimension")) return model.at("dimension").get<int>();
    for (const char* key : {"spot", "volatility", "dividend"}) {
        if (model.contains(key) && model.at(key).is_array()) return static_cast<int>(model.at(key).size());
    }
    return 1;
}

TrainConfig parse_train(const json& r) {
    TrainConfig t;
    t.epochs = r.value("epochs", t.epochs);
    t.batch_size = r.value("batch_size", t.batch_size);
    t.learning_rate = r.value("learning_rate", t.learning_rate);
    t.final_learning_rate = r.value("final_learning_rate", t.final_learning_rate);
    t.beta1 = r.value("beta1", t.beta1);
    t.beta2 = r.value("beta2", t.beta2);
    t.epsilon = r.value("epsilon", t.epsilon);
    t.standardize_inputs = r.value("standardize_inputs", t.standardize_inputs);
    t.standardize_targets = r.value("standardize_targets", t.standardize_targets);
    t.max_norm = r.value("max_norm", t.max_norm);
    t.activation.negative_slope = r.value("negative_slope", t.activation.negative_slope);
    return t;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    ExperimentConfig c;
    try {
        const int version = doc.at("schema_version").get<int>();
        if (version != kConfigSchemaVersion)
            throw ConfigError("unsupported schema_version " + std::to_string(version));
        c.name = doc.value("name", std::string("experiment"));

        const auto& model = doc.at("model");
        const auto type = model.at("type").get<std::string>();
        if (type == "black_scholes") {
            c.model = ModelKind::black_scholes;
            const int d = model_dimension(model);
            if (d < 1) throw ConfigError("model.dimension must be >= 1");
            c.black_scholes.spot = vector_field(model, "spot", d);
            c.black_scholes.volatility = vector_field(model, "volatility", d);
            c.black_scholes.dividend =
                model.contains("dividend") ? vector_field(model, "dividend", d) : std::vector<double>(d, 0.0);
            c.black_scholes.rate = model.at("rate").get<double>();
            c.black_scholes.correlation = model.value("correlation", 0.0);
        } else if (type == "heston") {
            c.model = ModelKind::heston;
            auto& h = c.heston;
            h.spot = model.at("spot").get<double>();
            h.initial_variance = model.at("initial_variance").get<double>();
            h.mean_reversion = model.at("mean_reversion").get<double>();
            h.long_run_variance = model.at("long_run_variance").get<double>();
            h.vol_of_vol = model.at("vol_of_vol").get<double>();
            h.correlation = model.at("correlation").get<double>();
            h.rate = model.at("rate").get<double>();
        } else {
            throw ConfigError("unknown model type '" + type + "'");
        }

        const auto& payoff = doc.at("payoff");
        c.payoff.kind = payoff_kind_from_string(payoff.at("kind").get<std::string>());
        c.payoff.strike = payoff.at("strike").get<double>();
        if (payoff.contains("weights")) {
            const auto& w = payoff.at("weights");
            c.payoff.weights = w.is_number()
                                   ? std::vector<double>(c.state_dim(), w.get<double>())
                                   : w.get<std::vector<double>>();
        }

        const auto& grid = doc.at("grid");
        const double maturity = grid.at("maturity").get<double>();
        const int dates = grid.at("dates").get<int>();
        if (grid.contains("euler_steps_per_year")) {
            c.grid = ExerciseGrid::uniform_with_step_rate(maturity, dates, grid.at("euler_steps_per_year").get<double>());
        } else if (grid.contains("substeps_per_interval")) {
            c.grid = ExerciseGrid::uniform(maturity, dates, grid.at("substeps_per_interval").get<int>());
        } else if (c.model == ModelKind::heston) {
            c.grid = ExerciseGrid::uniform_with_step_rate(maturity, dates, 30.0);
        } else {
            c.grid = ExerciseGrid::uniform(maturity, dates, 1);
        }

        const auto paths = doc.at("paths").get<long long>();
        if (paths < 1) throw ConfigError("paths must be >= 1");
        c.paths = static_cast<std::size_t>(paths);

        const auto& reg = doc.at("regressor");
        const auto reg_type = reg.at("type").get<std::string>();
        if (reg_type == "neural") {
            c.regressor.kind = RegressorConfig::Kind::neural;
            c.regressor.depth = reg.value("depth", 2);
            c.regressor.width = reg.value("width", 32);
            c.regressor.train = parse_train(reg);
            if (reg.contains("first_fit_epochs")) c.regressor.first_fit_epochs = reg.at("first_fit_epochs").get<int>();
        } else if (reg_type == "polynomial") {
            c.regressor.kind = RegressorConfig::Kind::polynomial;
            c.regressor.degree = reg.at("degree").get<int>();
            c.regressor.ridge = reg.value("ridge", 1e-10);
        } else {
            throw ConfigError("unknown regressor type '" + reg_type + "'");
        }

        c.repetitions = doc.value("repetitions", 1);
        c.seed = doc.value("seed", std::uint64_t{1});
        c.same_seed_each_repetition = doc.value("same_seed_each_repetition", false);
        c.out_of_sample = doc.value("out_of_sample", false);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    c.validate();
    return c;
}

json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in " + file.string() + ": " + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& file) { return parse_config(read_json_file(file)); }

json to_json(const ExperimentConfig& c) {
    json doc;
    doc["schema_version"] = kConfigSchemaVersion;
    doc["name"] = c.name;
    if (c.model == ModelKind::heston) {
        const auto& h = c.heston;
        doc["model"] = {{"type", "heston"},
                        {"spot", h.spot},
                        {"initial_variance", h.initial_variance},
                        {"mean_reversion", h.mean_reversion},
                        {"long_run_variance", h.long_run_variance},
                        {"vol_of_vol", h.vol_of_vol},
                        {"correlation", h.correlation},
                        {"rate", h.rate}};
    } else {
        const auto& b = c.black_scholes;
        doc["model"] = {{"type", "black_scholes"},
                        {"spot", b.spot},
                        {"volatility", b.volatility},
                        {"dividend", b.dividend},
                        {"rate", b.rate},
                        {"correlation", b.correlation}};
    }
    doc["payoff"] = {{"kind", std::string(to_string(c.payoff.kind))}, {"strike", c.payoff.strike}};
    if (!c.payoff.weights.empty()) doc["payoff"]["weights"] = c.payoff.weights;
    doc["grid"] = {{"maturity", c.grid.maturity},
                   {"dates", c.grid.dates_count()},
                   {"substeps_per_interval", c.grid.substeps_per_interval}};
    doc["paths"] = c.paths;
    if (c.regressor.kind == RegressorConfig::Kind::neural) {
        const auto& t = c.regressor.train;
        doc["regressor"] = {{"type", "neural"},
                            {"depth", c.regressor.depth},
                            {"width", c.regressor.width},
                            {"epochs", t.epochs},
                            {"batch_size", t.batch_size},
                            {"learning_rate", t.learning_rate},
                            {"final_learning_rate", t.final_learning_rate},
                            {"beta1", t.beta1},
                            {"beta2", t.beta2},
                            {"epsilon", t.epsilon},
                            {"standardize_inputs", t.standardize_inputs},
                            {"standardize_targets", t.standardize_targets},
                            {"max_norm", t.max_norm},
                            {"negative_slope", t.activation.negative_slope}};
        if (c.regressor.first_fit_epochs) doc["regressor"]["first_fit_epochs"] = *c.regressor.first_fit_epochs;
    } else {
        doc["regressor"] = {{"type", "polynomial"}, {"degree", c.regressor.degree}, {"ridge", c.regressor.ridge}};
    }
    doc["repetitions"] = c.repetitions;
    doc["seed"] = c.seed;
    doc["same_seed_each_repetition"] = c.same_seed_each_repetition;
    doc["out_of_sample"] = c.out_of_sample;
    return doc;
}

}  // namespace nnlsm
