#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "otriage/exec.hpp"

namespace otriage {

// Labeled feature vectors. `ids` give rows a stable identity so training can
// sort them canonically and stay independent of input order.
struct TrainingSet {
    std::vector<std::vector<double>> x;
    std::vector<std::string> y;    // root-cause service per row
    std::vector<std::string> ids;  // one per row, unique
};

struct Prediction {
    std::string label;
    // All classes, sorted by score descending, name ascending on ties.
    std::vector<std::pair<std::string, double>> ranking;
};

struct TreeConfig {
    int max_depth = 20;
    int min_samples_leaf = 1;
};

struct TreeNode {
    int column = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<std::pair<int, int>> dist;  // leaves: (class index, count)

    bool is_leaf() const { return column < 0; }
};

class DecisionTreeModel {
public:
    DecisionTreeModel() = default;
    DecisionTreeModel(std::vector<std::string> classes, std::size_t dim,
                      std::vector<TreeNode> nodes);

    Prediction predict(std::span<const double> x) const;
    const std::vector<std::string>& classes() const { return classes_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    std::size_t dim() const { return dim_; }
    int depth() const;

private:
    std::vector<std::string> classes_;
    std::size_t dim_ = 0;
    std::vector<TreeNode> nodes_;  // nodes_[0] is the root
};

struct SvmConfig {
    double l2 = 1e-2;
    int epochs = 200;
    double lr = 0.1;  // epoch e runs at lr / (1 + e)
    std::uint64_t seed = 42;
};

class LinearSvmModel {
public:
    LinearSvmModel() = default;
    LinearSvmModel(std::vector<std::string> classes, std::vector<std::vector<double>> weights,
                   std::vector<double> bias);

    Prediction predict(std::span<const double> x) const;
    const std::vector<std::string>& classes() const { return classes_; }
    const std::vector<std::vector<double>>& weights() const { return weights_; }
    const std::vector<double>& bias() const { return bias_; }
    std::size_t dim() const { return weights_.empty() ? 0 : weights_[0].size(); }

private:
    std::vector<std::string> classes_;
    std::vector<std::vector<double>> weights_;  // one row per class
    std::vector<double> bias_;
};

// Greedy binary CART with Gini impurity. Candidate thresholds are midpoints
// between consecutive distinct column values; the winner minimizes the
// children's weighted impurity with ties broken toward the lowest column,
// then the lowest threshold. A node splits whenever it is impure, depth
// allows, and some candidate keeps both children at min_samples_leaf, even
// when the best candidate has zero gain.
DecisionTreeModel train_tree(const TrainingSet& data, const TreeConfig& cfg,
                             ExecMode mode = ExecMode::Serial);

// One-vs-rest hinge loss via per-example subgradient steps. Each class trains
// from its own RNG stream, so classes can train in parallel with results
// identical to serial. Throws if the data carries fewer than two classes.
LinearSvmModel train_svm(const TrainingSet& data, const SvmConfig& cfg,
                         ExecMode mode = ExecMode::Serial);

double training_accuracy(const DecisionTreeModel& model, const TrainingSet& data);
double training_accuracy(const LinearSvmModel& model, const TrainingSet& data);

enum class ModelKind { Tree, Svm };

// A trained classifier plus enough context to refuse mismatched inputs: the
// feature-schema fingerprint and the window the training graphs were built
// with (kept as the exact CLI-facing offset strings).
struct TriageModel {
    ModelKind kind = ModelKind::Tree;
    DecisionTreeModel tree;
    LinearSvmModel svm;
    std::uint64_t schema_hash = 0;
    std::string window_start = "-2";
    std::string window_end = "1/3";
    std::int64_t t_ms = 3'600'000;

    Prediction predict(std::span<const double> x) const;
    const std::vector<std::string>& classes() const;
};

// Text serialization with hexfloat parameters: byte-stable across runs and
// exact on reload. Ends with an `end` line so truncated files are detected.
std::string serialize_model(const TriageModel& model);
TriageModel parse_model(const std::string& text, const std::string& origin);
void save_model(const TriageModel& model, const std::string& path);
TriageModel load_model(const std::string& path);

}  // namespace otriage
