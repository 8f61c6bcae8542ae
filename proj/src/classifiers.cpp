#include "gazeforge/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gazeforge/errors.hpp"
#include "gazeforge/rng.hpp"

namespace gazeforge {

std::string_view to_string(ClassifierKind kind) noexcept {
    return kind == ClassifierKind::logreg ? "logreg" : "rf";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
    if (name == "logreg") {
        return ClassifierKind::logreg;
    }
    if (name == "rf") {
        return ClassifierKind::random_forest;
    }
    throw ConfigError("unknown classifier '" + std::string(name) + "' (expected logreg or rf)");
}

Eigen::MatrixXd to_matrix(const FeatureTable& table) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(table.size()), static_cast<Eigen::Index>(table.width()));
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::size_t j = 0; j < table.width(); ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table.rows[i][j];
        }
    }
    return x;
}

namespace {

void check_training_input(const Eigen::MatrixXd& x, std::span<const int> y) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) {
        throw ConfigError("training data: row count and label count differ");
    }
    if (!x.allFinite()) {
        throw DataError("training data contains a non-finite feature value");
    }
    const auto positives = std::count(y.begin(), y.end(), 1);
    if (positives == 0 || positives == static_cast<std::ptrdiff_t>(y.size())) {
        throw DataError("training data must contain both classes");
    }
}

double sigmoid(double s) {
    if (s >= 0.0) {
        return 1.0 / (1.0 + std::exp(-s));
    }
    const double e = std::exp(s);
    return e / (1.0 + e);
}

double softplus(double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); }

Eigen::VectorXd to_vector(std::span<const int> y) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = static_cast<double>(y[i]);
    }
    return out;
}

void check_width(std::size_t got, std::size_t want) {
    if (got != want) {
        throw ConfigError("feature-schema mismatch: model expects " + std::to_string(want) +
                          " features, got " + std::to_string(got));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Logistic regression

double logreg_loss(const Eigen::MatrixXd& z, std::span<const int> y, const Eigen::VectorXd& w,
                   double b, double l2) {
    const Eigen::VectorXd s = (z * w).array() + b;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        loss += softplus(s(i)) - y[static_cast<std::size_t>(i)] * s(i);
    }
    return loss + 0.5 * l2 * w.squaredNorm();
}

Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& z, std::span<const int> y,
                                const Eigen::VectorXd& w, double b, double l2) {
    const Eigen::VectorXd s = (z * w).array() + b;
    Eigen::VectorXd residual(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        residual(i) = sigmoid(s(i)) - y[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd g(w.size() + 1);
    g.head(w.size()) = z.transpose() * residual + l2 * w;
    g(w.size()) = residual.sum();
    return g;
}

LogRegModel train_logreg(const Eigen::MatrixXd& x, std::span<const int> y, const LogRegOptions& options) {
    check_training_input(x, y);
    if (!(options.l2 >= 0.0)) {
        throw ConfigError("logreg: l2 must be >= 0");
    }
    const auto n = x.rows();
    const auto d = x.cols();

    LogRegModel model;
    model.mean = x.colwise().mean().transpose();
    model.scale.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double sd = std::sqrt((x.col(j).array() - model.mean(j)).square().sum() / static_cast<double>(n));
        model.scale(j) = sd > 1e-12 * std::max(1.0, std::abs(model.mean(j))) ? sd : 1.0;
    }
    const Eigen::MatrixXd z =
        (x.rowwise() - model.mean.transpose()).array().rowwise() / model.scale.transpose().array();
    const Eigen::VectorXd yv = to_vector(y);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
    const double prior = yv.mean();
    double b = std::log(prior / (1.0 - prior));
    double loss = logreg_loss(z, y, w, b, options.l2);

    int iter = 0;
    Eigen::VectorXd g = logreg_gradient(z, y, w, b, options.l2);
    while (iter < options.max_iterations && g.lpNorm<Eigen::Infinity>() > options.gradient_tolerance) {
        // Hessian over (w, b): [Z^T D Z + l2 I, Z^T D 1; 1^T D Z, sum D].
        const Eigen::VectorXd s = (z * w).array() + b;
        Eigen::VectorXd dw(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double p = sigmoid(s(i));
            dw(i) = p * (1.0 - p);
        }
        Eigen::MatrixXd zb(n, d + 1);
        zb.leftCols(d) = z;
        zb.col(d).setOnes();
        Eigen::MatrixXd h = zb.transpose() * dw.asDiagonal() * zb;
        h.topLeftCorner(d, d).diagonal().array() += options.l2;
        h.diagonal().array() += 1e-12;

        Eigen::VectorXd step = h.ldlt().solve(g);
        if (!step.allFinite() || step.dot(g) <= 0.0) {
            step = g;  // fall back to steepest descent
        }
        double t = 1.0;
        Eigen::VectorXd w_new;
        double b_new = b;
        double loss_new = loss;
        while (true) {
            w_new = w - t * step.head(d);
            b_new = b - t * step(d);
            loss_new = logreg_loss(z, y, w_new, b_new, options.l2);
            if (loss_new <= loss - 1e-4 * t * step.dot(g) || t < 1e-12) {
                break;
            }
            t *= 0.5;
        }
        ++iter;
        if (loss_new > loss) {
            break;  // no descent possible at machine precision
        }
        w = w_new;
        b = b_new;
        loss = loss_new;
        g = logreg_gradient(z, y, w, b, options.l2);
    }

    model.weights = w;
    model.bias = b;
    model.iterations = iter;
    model.gradient_norm = g.lpNorm<Eigen::Infinity>();
    return model;
}

double LogRegModel::predict_proba(std::span<const double> x) const {
    check_width(x.size(), static_cast<std::size_t>(weights.size()));
    double s = bias;
    for (Eigen::Index j = 0; j < weights.size(); ++j) {
        s += weights(j) * (x[static_cast<std::size_t>(j)] - mean(j)) / scale(j);
    }
    return sigmoid(s);
}

// ---------------------------------------------------------------------------
// Random forest

double DecisionTree::predict_proba(std::span<const double> x) const {
    int node = 0;
    while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& n = nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(node)].p_female;
}

double RfModel::predict_proba(std::span<const double> x) const {
    check_width(x.size(), feature_names.empty() ? x.size() : feature_names.size());
    double acc = 0.0;
    for (const auto& tree : trees) {
        acc += tree.predict_proba(x);
    }
    return acc / static_cast<double>(trees.size());
}

void GridSpec::validate() const {
    if (n_trees.empty() || max_depth.empty() || min_leaf.empty()) {
        throw ConfigError("rf grid: every hyper-parameter needs at least one candidate");
    }
    if (cv_folds < 2) {
        throw ConfigError("rf grid: cv_folds must be >= 2");
    }
    for (int t : n_trees) {
        if (t < 1) {
            throw ConfigError("rf grid: tree count must be >= 1");
        }
    }
    for (int depth : max_depth) {
        if (depth < 0) {
            throw ConfigError("rf grid: max depth must be >= 0 (0 = unlimited)");
        }
    }
    for (int leaf : min_leaf) {
        if (leaf < 1) {
            throw ConfigError("rf grid: min leaf must be >= 1");
        }
    }
}

std::vector<ForestParams> GridSpec::points() const {
    std::vector<ForestParams> out;
    for (int t : n_trees) {
        for (int depth : max_depth) {
            for (int leaf : min_leaf) {
                out.push_back({t, depth, leaf});
            }
        }
    }
    return out;
}

namespace {

struct TreeBuilder {
    const Eigen::MatrixXd& x;
    std::span<const int> y;
    const ForestParams& params;
    Rng& rng;
    int mtry;
    DecisionTree tree;

    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double impurity = 0.0;
    };

    static double gini(double pos, double n) {
        const double p = pos / n;
        return 2.0 * p * (1.0 - p);
    }

    Split best_split(std::span<const int> rows) {
        Split best;
        best.impurity = std::numeric_limits<double>::infinity();
        std::vector<int> features(static_cast<std::size_t>(x.cols()));
        std::iota(features.begin(), features.end(), 0);
        rng.shuffle(std::span<int>(features));

        const double n = static_cast<double>(rows.size());
        std::vector<int> order(rows.begin(), rows.end());
        int usable = 0;
        for (int f : features) {
            if (usable >= mtry) {
                break;
            }
            std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
            const double total_pos = std::accumulate(order.begin(), order.end(), 0.0,
                                                     [&](double acc, int r) { return acc + y[static_cast<std::size_t>(r)]; });
            double left_pos = 0.0;
            bool any = false;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                left_pos += y[static_cast<std::size_t>(order[i])];
                const double lo = x(order[i], f);
                const double hi = x(order[i + 1], f);
                const auto n_left = static_cast<int>(i + 1);
                const auto n_right = static_cast<int>(order.size()) - n_left;
                if (!(lo < hi) || n_left < params.min_leaf || n_right < params.min_leaf) {
                    continue;
                }
                any = true;
                const double impurity =
                    (n_left * gini(left_pos, n_left) + n_right * gini(total_pos - left_pos, n_right)) / n;
                if (impurity < best.impurity) {
                    best = {f, lo + 0.5 * (hi - lo), impurity};
                }
            }
            if (any) {
                ++usable;
            }
        }
        return best;
    }

    int grow(std::vector<int> rows, int depth) {
        const int index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        double pos = 0.0;
        for (int r : rows) {
            pos += y[static_cast<std::size_t>(r)];
        }
        const double n = static_cast<double>(rows.size());
        tree.nodes[static_cast<std::size_t>(index)].p_female = pos / n;

        const bool pure = pos == 0.0 || pos == n;
        const bool depth_limited = params.max_depth > 0 && depth >= params.max_depth;
        if (pure || depth_limited || static_cast<int>(rows.size()) < 2 * params.min_leaf) {
            return index;
        }
        const Split split = best_split(rows);
        if (split.feature < 0) {
            return index;
        }
        std::vector<int> left;
        std::vector<int> right;
        for (int r : rows) {
            (x(r, split.feature) <= split.threshold ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        const int l = grow(std::move(left), depth + 1);
        const int rgt = grow(std::move(right), depth + 1);
        auto& node = tree.nodes[static_cast<std::size_t>(index)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = l;
        node.right = rgt;
        return index;
    }
};

}  // namespace

RfModel fit_forest(const Eigen::MatrixXd& x, std::span<const int> y, const ForestParams& params,
                   std::uint64_t seed) {
    check_training_input(x, y);
    if (params.n_trees < 1 || params.min_leaf < 1 || params.max_depth < 0) {
        throw ConfigError("random forest: invalid hyper-parameters");
    }
    RfModel model;
    model.params = params;
    model.seed = seed;
    const auto n = static_cast<std::size_t>(x.rows());
    const int mtry = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(x.cols())))));
    Rng rng(seed);
    model.trees.reserve(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        std::vector<int> rows(n);
        for (auto& r : rows) {
            r = static_cast<int>(rng.below(n));
        }
        TreeBuilder builder{x, y, params, rng, mtry, {}};
        builder.grow(std::move(rows), 0);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

std::vector<int> stratified_folds(std::span<const int> y, int folds, std::uint64_t seed) {
    if (folds < 2) {
        throw ConfigError("stratified_folds: need at least 2 folds");
    }
    Rng rng(seed);
    std::vector<int> assignment(y.size(), 0);
    int next = 0;
    for (int cls : {1, 0}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] == cls) {
                members.push_back(i);
            }
        }
        rng.shuffle(std::span<std::size_t>(members));
        for (auto i : members) {
            assignment[i] = next;
            next = (next + 1) % folds;
        }
    }
    return assignment;
}

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& x, std::span<const std::size_t> rows) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

}  // namespace

RfModel train_rf(const Eigen::MatrixXd& x, std::span<const int> y, const GridSpec& grid, std::uint64_t seed) {
    check_training_input(x, y);
    grid.validate();
    const auto positives = std::count(y.begin(), y.end(), 1);
    const auto negatives = static_cast<std::ptrdiff_t>(y.size()) - positives;
    const int folds = static_cast<int>(std::min<std::ptrdiff_t>(grid.cv_folds, std::min(positives, negatives)));

    const auto points = grid.points();
    ForestParams best = points.front();
    double best_score = -1.0;
    if (folds >= 2) {
        const auto assignment = stratified_folds(y, folds, derive_seed(seed, 0x6772696400ULL));
        for (std::size_t g = 0; g < points.size(); ++g) {
            std::size_t correct = 0;
            for (int k = 0; k < folds; ++k) {
                std::vector<std::size_t> train;
                std::vector<std::size_t> test;
                for (std::size_t i = 0; i < y.size(); ++i) {
                    (assignment[i] == k ? test : train).push_back(i);
                }
                std::vector<int> y_train;
                for (auto i : train) {
                    y_train.push_back(y[i]);
                }
                const auto model = fit_forest(take_rows(x, train), y_train, points[g],
                                              derive_seed(seed, static_cast<std::uint64_t>(k + 1)));
                for (auto i : test) {
                    const double p = model.predict_proba(std::span<const double>(
                        x.row(static_cast<Eigen::Index>(i)).eval().data(), static_cast<std::size_t>(x.cols())));
                    correct += static_cast<std::size_t>((p >= 0.5 ? 1 : 0) == y[i]);
                }
            }
            const double score = static_cast<double>(correct) / static_cast<double>(y.size());
            if (score > best_score) {
                best_score = score;
                best = points[g];
            }
        }
    }
    RfModel model = fit_forest(x, y, best, derive_seed(seed, 0));
    model.cv_accuracy = std::max(best_score, 0.0);
    return model;
}

// ---------------------------------------------------------------------------

Classifier train_classifier(ClassifierKind kind, const FeatureTable& table, const ClassifierOptions& options,
                            std::uint64_t seed) {
    const Eigen::MatrixXd x = to_matrix(table);
    const auto y = table.class_labels();
    if (kind == ClassifierKind::logreg) {
        auto model = train_logreg(x, y, options.logreg);
        model.feature_names = table.feature_names;
        return model;
    }
    auto model = train_rf(x, y, options.grid, seed);
    model.feature_names = table.feature_names;
    return model;
}

const std::vector<std::string>& feature_names(const Classifier& model) {
    return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.feature_names; }, model);
}

double predict_proba(const Classifier& model, const FeatureVector& x) {
    if (x.names != feature_names(model)) {
        throw ConfigError("feature-schema mismatch between model and input vector");
    }
    return std::visit([&](const auto& m) { return m.predict_proba(x.values); }, model);
}

std::vector<double> predict_proba(const Classifier& model, const FeatureTable& table) {
    if (table.feature_names != feature_names(model)) {
        throw ConfigError("feature-schema mismatch between model and input table");
    }
    std::vector<double> out;
    out.reserve(table.size());
    for (const auto& row : table.rows) {
        out.push_back(std::visit([&](const auto& m) { return m.predict_proba(row); }, model));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr const char* kModelFormat = "gazeforge-classifier";
constexpr int kModelVersion = 1;

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json to_json(const Classifier& model) {
    nlohmann::json j;
    j["format"] = kModelFormat;
    j["version"] = kModelVersion;
    j["features"] = feature_names(model);
    if (const auto* lr = std::get_if<LogRegModel>(&model)) {
        j["kind"] = "logreg";
        j["weights"] = to_std(lr->weights);
        j["bias"] = lr->bias;
        j["mean"] = to_std(lr->mean);
        j["scale"] = to_std(lr->scale);
        return j;
    }
    const auto& rf = std::get<RfModel>(model);
    j["kind"] = "rf";
    j["params"] = {{"n_trees", rf.params.n_trees}, {"max_depth", rf.params.max_depth},
                   {"min_leaf", rf.params.min_leaf}};
    j["seed"] = rf.seed;
    j["cv_accuracy"] = rf.cv_accuracy;
    auto& trees = j["trees"] = nlohmann::json::array();
    for (const auto& tree : rf.trees) {
        auto nodes = nlohmann::json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back({n.feature, n.threshold, n.left, n.right, n.p_female});
        }
        trees.push_back(std::move(nodes));
    }
    return j;
}

Classifier classifier_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format").get<std::string>() != kModelFormat || j.at("version").get<int>() != kModelVersion) {
            throw DataError("unsupported model format or version");
        }
        const auto names = j.at("features").get<std::vector<std::string>>();
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "logreg") {
            LogRegModel m;
            m.feature_names = names;
            m.weights = to_eigen(j.at("weights").get<std::vector<double>>());
            m.bias = j.at("bias").get<double>();
            m.mean = to_eigen(j.at("mean").get<std::vector<double>>());
            m.scale = to_eigen(j.at("scale").get<std::vector<double>>());
            if (static_cast<std::size_t>(m.weights.size()) != names.size() || m.mean.size() != m.weights.size() ||
                m.scale.size() != m.weights.size()) {
                throw DataError("logreg model: inconsistent vector lengths");
            }
            return m;
        }
        if (kind == "rf") {
            RfModel m;
            m.feature_names = names;
            const auto& p = j.at("params");
            m.params = {p.at("n_trees").get<int>(), p.at("max_depth").get<int>(), p.at("min_leaf").get<int>()};
            m.seed = j.at("seed").get<std::uint64_t>();
            m.cv_accuracy = j.at("cv_accuracy").get<double>();
            for (const auto& jt : j.at("trees")) {
                DecisionTree tree;
                for (const auto& jn : jt) {
                    tree.nodes.push_back({jn.at(0).get<int>(), jn.at(1).get<double>(), jn.at(2).get<int>(),
                                          jn.at(3).get<int>(), jn.at(4).get<double>()});
                }
                if (tree.nodes.empty()) {
                    throw DataError("rf model: empty tree");
                }
                m.trees.push_back(std::move(tree));
            }
            if (m.trees.empty()) {
                throw DataError("rf model: no trees");
            }
            return m;
        }
        throw DataError("unknown model kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model: ") + e.what());
    }
}

}  // namespace gazeforge
