#include <fstream>
#include <sstream>

#include <json.hpp>

#include "armauth/error.hpp"
#include "armauth/io.hpp"
#include "internal.hpp"

namespace armauth {
namespace {

using nlohmann::json;

constexpr int kModelFormatVersion = 1;

json config_to_json(const ClassifierConfig& c) {
    return json{{"kind", classifier_name(c.kind)},
                {"k", c.k},
                {"knn_weighting", c.knn_weighting == KnnWeighting::Uniform ? "uniform" : "inverse_distance"},
                {"trees", c.trees},
                {"seed", c.seed},
                {"mlp",
                 {{"hidden_units", c.mlp.hidden_units},
                  {"epochs", c.mlp.epochs},
                  {"learning_rate", c.mlp.learning_rate},
                  {"momentum", c.mlp.momentum},
                  {"batch_size", c.mlp.batch_size}}},
                {"logreg",
                 {{"ridge", c.logreg.ridge}, {"max_iters", c.logreg.max_iters}, {"tolerance", c.logreg.tolerance}}}};
}

ClassifierConfig config_from_json(const json& j) {
    ClassifierConfig c;
    c.kind = parse_classifier(j.at("kind").get<std::string>());
    c.k = j.at("k").get<std::size_t>();
    c.knn_weighting = j.at("knn_weighting").get<std::string>() == "uniform" ? KnnWeighting::Uniform
                                                                            : KnnWeighting::InverseDistance;
    c.trees = j.at("trees").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto& m = j.at("mlp");
    c.mlp.hidden_units = m.at("hidden_units").get<std::size_t>();
    c.mlp.epochs = m.at("epochs").get<std::size_t>();
    c.mlp.learning_rate = m.at("learning_rate").get<double>();
    c.mlp.momentum = m.at("momentum").get<double>();
    c.mlp.batch_size = m.at("batch_size").get<std::size_t>();
    const auto& l = j.at("logreg");
    c.logreg.ridge = l.at("ridge").get<double>();
    c.logreg.max_iters = l.at("max_iters").get<std::size_t>();
    c.logreg.tolerance = l.at("tolerance").get<double>();
    return c;
}

struct ParamsToJson {
    json operator()(const model::Knn& p) const {
        return json{{"dims", p.dims}, {"rows", p.rows}, {"labels", p.labels}};
    }
    json operator()(const model::LogisticRegression& p) const {
        return json{{"weights", p.weights},
                    {"intercept", p.intercept},
                    {"iterations", p.iterations},
                    {"gradient_norm", p.gradient_norm}};
    }
    json operator()(const model::Perceptron& p) const {
        return json{{"inputs", p.inputs}, {"hidden", p.hidden}, {"w_hidden", p.w_hidden},
                    {"b_hidden", p.b_hidden}, {"w_out", p.w_out},   {"b_out", p.b_out}};
    }
    json operator()(const model::Forest& p) const {
        json trees = json::array();
        for (const auto& t : p.trees) {
            // Columnar node storage keeps large forests compact.
            json f = json::array(), thr = json::array(), l = json::array(), r = json::array(), g = json::array();
            for (const auto& n : t.nodes) {
                f.push_back(n.feature);
                thr.push_back(n.threshold);
                l.push_back(n.left);
                r.push_back(n.right);
                g.push_back(n.genuine_fraction);
            }
            trees.push_back(json{{"feature", f}, {"threshold", thr}, {"left", l}, {"right", r}, {"genuine", g}});
        }
        return json{{"trees", trees}, {"oob_scores", p.oob_scores}};
    }
};

Model::Params params_from_json(ClassifierKind kind, const json& j) {
    switch (kind) {
        case ClassifierKind::kNNEuc: {
            model::Knn p;
            p.dims = j.at("dims").get<std::size_t>();
            p.rows = j.at("rows").get<std::vector<double>>();
            p.labels = j.at("labels").get<std::vector<int>>();
            if (p.dims == 0 || p.rows.size() != p.dims * p.labels.size()) throw InvalidInput("corrupt kNN parameters");
            return p;
        }
        case ClassifierKind::LogReg: {
            model::LogisticRegression p;
            p.weights = j.at("weights").get<std::vector<double>>();
            p.intercept = j.at("intercept").get<double>();
            p.iterations = j.at("iterations").get<std::size_t>();
            p.gradient_norm = j.at("gradient_norm").get<double>();
            return p;
        }
        case ClassifierKind::MulPer: {
            model::Perceptron p;
            p.inputs = j.at("inputs").get<std::size_t>();
            p.hidden = j.at("hidden").get<std::size_t>();
            p.w_hidden = j.at("w_hidden").get<std::vector<double>>();
            p.b_hidden = j.at("b_hidden").get<std::vector<double>>();
            p.w_out = j.at("w_out").get<std::vector<double>>();
            p.b_out = j.at("b_out").get<double>();
            if (p.w_hidden.size() != p.inputs * p.hidden || p.b_hidden.size() != p.hidden || p.w_out.size() != p.hidden)
                throw InvalidInput("corrupt perceptron parameters");
            return p;
        }
        case ClassifierKind::RanFor: {
            model::Forest p;
            for (const auto& t : j.at("trees")) {
                const auto f = t.at("feature").get<std::vector<int>>();
                const auto thr = t.at("threshold").get<std::vector<double>>();
                const auto l = t.at("left").get<std::vector<int>>();
                const auto r = t.at("right").get<std::vector<int>>();
                const auto g = t.at("genuine").get<std::vector<double>>();
                if (f.empty() || thr.size() != f.size() || l.size() != f.size() || r.size() != f.size() ||
                    g.size() != f.size())
                    throw InvalidInput("corrupt tree");
                model::Tree tree;
                for (std::size_t i = 0; i < f.size(); ++i) tree.nodes.push_back({f[i], thr[i], l[i], r[i], g[i]});
                p.trees.push_back(std::move(tree));
            }
            p.oob_scores = j.at("oob_scores").get<std::vector<double>>();
            return p;
        }
    }
    throw InvalidInput("unknown classifier kind");
}

}  // namespace

std::string serialize_model(const Model& m) {
    json names = json::array();
    for (const auto& id : m.layout()) names.push_back(id.qualified_name());
    json doc{{"format", "armauth-model"},
             {"version", kModelFormatVersion},
             {"config", config_to_json(m.config())},
             {"layout", names},
             {"norm", {{"mean", m.norm_stats().mean}, {"std", m.norm_stats().std}}},
             {"params", std::visit(ParamsToJson{}, m.params())}};
    return doc.dump();
}

Model deserialize_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "armauth-model") throw InvalidInput("not a model file");
        if (doc.at("version").get<int>() != kModelFormatVersion)
            throw InvalidInput("unsupported model file version " + std::to_string(doc.at("version").get<int>()));
        const ClassifierConfig cfg = config_from_json(doc.at("config"));
        std::vector<FeatureId> ids;
        for (const auto& n : doc.at("layout")) ids.push_back(FeatureId::parse_qualified(n.get<std::string>()));
        NormStats norm;
        norm.mean = doc.at("norm").at("mean").get<std::vector<double>>();
        norm.std = doc.at("norm").at("std").get<std::vector<double>>();
        if (norm.mean.size() != ids.size() || norm.std.size() != ids.size())
            throw InvalidInput("normalization does not match layout");
        return Model(cfg, FeatureLayout(std::move(ids)), std::move(norm), params_from_json(cfg.kind, doc.at("params")));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const Model& m, const std::filesystem::path& path) { write_file_atomic(path, serialize_model(m)); }

Model load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace armauth
