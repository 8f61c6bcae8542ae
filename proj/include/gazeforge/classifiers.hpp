#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "gazeforge/features.hpp"

namespace gazeforge {

enum class ClassifierKind { logreg, random_forest };

std::string_view to_string(ClassifierKind kind) noexcept;
ClassifierKind parse_classifier_kind(std::string_view name);

// Row-major design matrix plus 0/1 labels (1 = female).
Eigen::MatrixXd to_matrix(const FeatureTable& table);

// ---------------------------------------------------------------------------
// Logistic regression

struct LogRegOptions {
    double l2 = 1.0;  // ridge on standardized weights, intercept unpenalized
    int max_iterations = 500;
    double gradient_tolerance = 1e-6;  // max-norm
};

struct LogRegModel {
    std::vector<std::string> feature_names;
    Eigen::VectorXd weights;  // on standardized features
    double bias = 0.0;
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;  // training SD; 1 for constant features
    int iterations = 0;
    double gradient_norm = 0.0;

    double predict_proba(std::span<const double> x) const;
};

// Penalized negative log-likelihood
//   sum_i [log(1 + exp(s_i)) - y_i s_i] + l2/2 |w|^2,  s = Z w + b
// over already-standardized inputs Z.
double logreg_loss(const Eigen::MatrixXd& z, std::span<const int> y, const Eigen::VectorXd& w,
                   double b, double l2);

// Gradient of logreg_loss; entries 0..d-1 are d/dw, entry d is d/db.
Eigen::VectorXd logreg_gradient(const Eigen::MatrixXd& z, std::span<const int> y,
                                const Eigen::VectorXd& w, double b, double l2);

// Damped Newton iterations from w = 0, b = logit(prior).
LogRegModel train_logreg(const Eigen::MatrixXd& x, std::span<const int> y,
                         const LogRegOptions& options = {});

// ---------------------------------------------------------------------------
// Random forest

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;   // x[feature] <= threshold
    int right = -1;
    double p_female = 0.5;  // leaf class fraction; P(male) = 1 - p_female
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict_proba(std::span<const double> x) const;
};

struct ForestParams {
    int n_trees = 100;
    int max_depth = 0;  // 0 = unlimited
    int min_leaf = 1;

    friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct RfModel {
    std::vector<std::string> feature_names;
    std::vector<DecisionTree> trees;
    ForestParams params;
    std::uint64_t seed = 0;
    double cv_accuracy = 0.0;  // internal CV score of the chosen grid point

    double predict_proba(std::span<const double> x) const;
};

// Candidate lists per hyper-parameter; max_depth 0 means unlimited.
struct GridSpec {
    std::vector<int> n_trees{100, 300};
    std::vector<int> max_depth{3, 5, 0};
    std::vector<int> min_leaf{1, 5};
    int cv_folds = 5;

    void validate() const;
    std::vector<ForestParams> points() const;
};

// Bootstrap rows, sqrt(d) candidate features per split, Gini impurity,
// midpoint thresholds.
RfModel fit_forest(const Eigen::MatrixXd& x, std::span<const int> y, const ForestParams& params,
                   std::uint64_t seed);

// Scores every grid point by stratified k-fold accuracy on (x, y) and
// refits the best one (first in grid order on ties) on all rows.
RfModel train_rf(const Eigen::MatrixXd& x, std::span<const int> y, const GridSpec& grid,
                 std::uint64_t seed);

// ---------------------------------------------------------------------------

using Classifier = std::variant<LogRegModel, RfModel>;

struct ClassifierOptions {
    LogRegOptions logreg;
    GridSpec grid;
};

Classifier train_classifier(ClassifierKind kind, const FeatureTable& table,
                            const ClassifierOptions& options, std::uint64_t seed);

const std::vector<std::string>& feature_names(const Classifier& model);

// P(female). Throws ConfigError on a feature-schema mismatch.
double predict_proba(const Classifier& model, const FeatureVector& x);
std::vector<double> predict_proba(const Classifier& model, const FeatureTable& table);

// Stratified fold assignment: each class is shuffled and dealt round-robin,
// so every fold's complement holds both classes when each has >= 2 rows.
std::vector<int> stratified_folds(std::span<const int> y, int folds, std::uint64_t seed);

nlohmann::json to_json(const Classifier& model);
Classifier classifier_from_json(const nlohmann::json& j);

}  // namespace gazeforge
