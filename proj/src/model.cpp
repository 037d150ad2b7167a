#include "otriage/model.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "otriage/errors.hpp"
#include "otriage/rng.hpp"

namespace otriage {

namespace {

void validate(const TrainingSet& data) {
    if (data.x.empty()) throw ValidationError("empty training set");
    if (data.y.size() != data.x.size() || data.ids.size() != data.x.size())
        throw ValidationError("training set row arrays disagree in length");
    size_t dim = data.x[0].size();
    if (dim == 0) throw ValidationError("zero-dimensional feature vectors");
    std::set<std::string> seen;
    for (size_t i = 0; i < data.x.size(); ++i) {
        if (data.x[i].size() != dim) throw ValidationError("ragged feature matrix");
        for (double v : data.x[i])
            if (!std::isfinite(v)) throw ValidationError("non-finite feature value");
        if (data.y[i].empty()) throw ValidationError("empty label at row " + data.ids[i]);
        if (!seen.insert(data.ids[i]).second)
            throw ValidationError("duplicate row id: " + data.ids[i]);
    }
}

// Trainers see rows in this order regardless of how the caller assembled them.
std::vector<int> canonical_order(const TrainingSet& data) {
    std::vector<int> idx(data.x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (data.x[a] != data.x[b]) return data.x[a] < data.x[b];
        if (data.y[a] != data.y[b]) return data.y[a] < data.y[b];
        return data.ids[a] < data.ids[b];
    });
    return idx;
}

std::vector<std::string> distinct_labels(const TrainingSet& data) {
    std::set<std::string> s(data.y.begin(), data.y.end());
    return {s.begin(), s.end()};
}

std::vector<int> label_indices(const TrainingSet& data, const std::vector<std::string>& classes) {
    std::map<std::string, int> pos;
    for (size_t i = 0; i < classes.size(); ++i) pos[classes[i]] = static_cast<int>(i);
    std::vector<int> out(data.y.size());
    for (size_t i = 0; i < data.y.size(); ++i) out[i] = pos.at(data.y[i]);
    return out;
}

Prediction make_prediction(const std::vector<std::string>& classes,
                           const std::vector<double>& scores) {
    std::vector<int> idx(classes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return classes[a] < classes[b];
    });
    Prediction p;
    p.ranking.reserve(idx.size());
    for (int i : idx) p.ranking.emplace_back(classes[i], scores[i]);
    p.label = p.ranking.front().first;
    return p;
}

struct SplitChoice {
    bool valid = false;
    double impurity = 0.0;  // nL*gini(L) + nR*gini(R); node-size scale is shared
    int column = -1;
    double threshold = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const TrainingSet& data, const std::vector<int>& labels, int n_classes,
                const TreeConfig& cfg, ExecMode mode)
        : data_(data), labels_(labels), n_classes_(n_classes), cfg_(cfg), mode_(mode) {}

    std::vector<TreeNode> build(std::vector<int> root_rows) {
        build_node(std::move(root_rows), 0);
        return std::move(nodes_);
    }

private:
    // Sweep one column: rows sorted by value, whole equal-value groups move
    // left together, each boundary between distinct values is a candidate.
    // Sum-of-squares counters keep the impurity update O(1) per row.
    SplitChoice column_best(const std::vector<int>& rows, int col) const {
        std::vector<int> order(rows);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return data_.x[a][col] < data_.x[b][col];
        });
        const int n = static_cast<int>(order.size());
        std::vector<long long> left(n_classes_, 0), right(n_classes_, 0);
        long long ss_left = 0, ss_right = 0;
        for (int i : order) right[labels_[i]]++;
        for (long long c : right) ss_right += c * c;

        SplitChoice best;
        best.column = col;
        int n_left = 0;
        int i = 0;
        while (i < n) {
            double v = data_.x[order[i]][col];
            while (i < n && data_.x[order[i]][col] == v) {
                int c = labels_[order[i]];
                ss_left += 2 * left[c] + 1;
                left[c]++;
                ss_right -= 2 * right[c] - 1;
                right[c]--;
                ++n_left;
                ++i;
            }
            if (i == n) break;
            int n_right = n - n_left;
            if (n_left < cfg_.min_samples_leaf || n_right < cfg_.min_samples_leaf) continue;
            double imp = n_left - static_cast<double>(ss_left) / n_left + n_right -
                         static_cast<double>(ss_right) / n_right;
            if (!best.valid || imp < best.impurity) {
                best.valid = true;
                best.impurity = imp;
                double next = data_.x[order[i]][col];
                best.threshold = v + (next - v) / 2;
            }
        }
        return best;
    }

    SplitChoice find_split(const std::vector<int>& rows) const {
        const int dim = static_cast<int>(data_.x[0].size());
        std::vector<SplitChoice> per(dim);
        if (mode_ == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
            for (int c = 0; c < dim; ++c) per[c] = column_best(rows, c);
        } else {
            for (int c = 0; c < dim; ++c) per[c] = column_best(rows, c);
        }
        SplitChoice best;
        for (int c = 0; c < dim; ++c)
            if (per[c].valid && (!best.valid || per[c].impurity < best.impurity)) best = per[c];
        return best;
    }

    int build_node(std::vector<int> rows, int depth) {
        const int idx = static_cast<int>(nodes_.size());
        nodes_.emplace_back();

        std::vector<long long> counts(n_classes_, 0);
        for (int i : rows) counts[labels_[i]]++;
        int present = 0;
        for (long long c : counts)
            if (c > 0) ++present;

        SplitChoice split;
        if (present > 1 && depth < cfg_.max_depth) split = find_split(rows);
        if (!split.valid) {
            TreeNode leaf;
            for (int c = 0; c < n_classes_; ++c)
                if (counts[c] > 0) leaf.dist.emplace_back(c, static_cast<int>(counts[c]));
            nodes_[idx] = std::move(leaf);
            return idx;
        }

        std::vector<int> lrows, rrows;
        for (int i : rows)
            (data_.x[i][split.column] <= split.threshold ? lrows : rrows).push_back(i);
        rows.clear();
        rows.shrink_to_fit();
        int l = build_node(std::move(lrows), depth + 1);
        int r = build_node(std::move(rrows), depth + 1);
        nodes_[idx].column = split.column;
        nodes_[idx].threshold = split.threshold;
        nodes_[idx].left = l;
        nodes_[idx].right = r;
        return idx;
    }

    const TrainingSet& data_;
    const std::vector<int>& labels_;
    int n_classes_;
    TreeConfig cfg_;
    ExecMode mode_;
    std::vector<TreeNode> nodes_;
};

double dot(const std::vector<double>& w, const std::vector<double>& x) {
    double s = 0.0;
    for (size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
    return s;
}

std::string hexf(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hexf(const std::string& s, const std::string& origin) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw ParseError(origin + ": bad floating-point value: " + s);
    return v;
}

long long parse_ll(const std::string& s, const std::string& origin) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE)
        throw ParseError(origin + ": bad integer: " + s);
    return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::vector<std::string> split_spaces(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

void check_token(const std::string& s, const char* what) {
    if (s.empty() || s.find('\t') != std::string::npos || s.find('\n') != std::string::npos)
        throw ValidationError(std::string("model field not serializable (") + what + "): " + s);
}

}  // namespace

DecisionTreeModel::DecisionTreeModel(std::vector<std::string> classes, std::size_t dim,
                                     std::vector<TreeNode> nodes)
    : classes_(std::move(classes)), dim_(dim), nodes_(std::move(nodes)) {
    if (classes_.empty()) throw ValidationError("tree model without classes");
    if (nodes_.empty()) throw ValidationError("tree model without nodes");
    const int n = static_cast<int>(nodes_.size());
    for (int i = 0; i < n; ++i) {
        const TreeNode& node = nodes_[i];
        if (node.is_leaf()) {
            if (node.dist.empty()) throw ValidationError("leaf without class counts");
            for (auto [c, cnt] : node.dist)
                if (c < 0 || c >= static_cast<int>(classes_.size()) || cnt <= 0)
                    throw ValidationError("leaf distribution out of range");
        } else {
            if (node.column >= static_cast<int>(dim_))
                throw ValidationError("split column out of range");
            if (node.left <= i || node.left >= n || node.right <= i || node.right >= n)
                throw ValidationError("split children out of preorder range");
        }
    }
}

Prediction DecisionTreeModel::predict(std::span<const double> x) const {
    if (x.size() != dim_) throw ValidationError("feature vector has wrong dimension");
    const TreeNode* node = &nodes_[0];
    while (!node->is_leaf())
        node = &nodes_[x[node->column] <= node->threshold ? node->left : node->right];
    long long total = 0;
    for (auto [c, cnt] : node->dist) total += cnt;
    std::vector<double> scores(classes_.size(), 0.0);
    for (auto [c, cnt] : node->dist) scores[c] = static_cast<double>(cnt) / total;
    return make_prediction(classes_, scores);
}

int DecisionTreeModel::depth() const {
    // Preorder guarantees children follow parents, so one reverse pass works.
    std::vector<int> d(nodes_.size(), 0);
    int best = 0;
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
        if (!nodes_[i].is_leaf())
            d[i] = 1 + std::max(d[nodes_[i].left], d[nodes_[i].right]);
        best = std::max(best, d[i]);
    }
    return d.empty() ? 0 : d[0];
}

LinearSvmModel::LinearSvmModel(std::vector<std::string> classes,
                               std::vector<std::vector<double>> weights,
                               std::vector<double> bias)
    : classes_(std::move(classes)), weights_(std::move(weights)), bias_(std::move(bias)) {
    if (classes_.size() < 2) throw ValidationError("svm model needs at least two classes");
    if (weights_.size() != classes_.size() || bias_.size() != classes_.size())
        throw ValidationError("svm model arrays disagree in length");
    for (const auto& w : weights_)
        if (w.size() != weights_[0].size()) throw ValidationError("ragged svm weights");
}

Prediction LinearSvmModel::predict(std::span<const double> x) const {
    if (x.size() != dim()) throw ValidationError("feature vector has wrong dimension");
    std::vector<double> scores(classes_.size());
    for (size_t k = 0; k < classes_.size(); ++k) {
        double s = bias_[k];
        for (size_t j = 0; j < x.size(); ++j) s += weights_[k][j] * x[j];
        scores[k] = s;
    }
    return make_prediction(classes_, scores);
}

DecisionTreeModel train_tree(const TrainingSet& data, const TreeConfig& cfg, ExecMode mode) {
    validate(data);
    if (cfg.max_depth < 0) throw ValidationError("max_depth must be >= 0");
    if (cfg.min_samples_leaf < 1) throw ValidationError("min_samples_leaf must be >= 1");
    std::vector<std::string> classes = distinct_labels(data);
    std::vector<int> labels = label_indices(data, classes);
    TreeBuilder builder(data, labels, static_cast<int>(classes.size()), cfg, mode);
    std::vector<TreeNode> nodes = builder.build(canonical_order(data));
    return DecisionTreeModel(std::move(classes), data.x[0].size(), std::move(nodes));
}

LinearSvmModel train_svm(const TrainingSet& data, const SvmConfig& cfg, ExecMode mode) {
    validate(data);
    if (cfg.epochs < 1) throw ValidationError("epochs must be >= 1");
    if (cfg.l2 < 0.0 || cfg.lr <= 0.0) throw ValidationError("bad svm hyperparameters");
    std::vector<std::string> classes = distinct_labels(data);
    if (classes.size() < 2)
        throw ValidationError("one-vs-rest training needs at least two classes");
    std::vector<int> labels = label_indices(data, classes);
    std::vector<int> rows = canonical_order(data);

    const int n_classes = static_cast<int>(classes.size());
    const int n = static_cast<int>(rows.size());
    const size_t dim = data.x[0].size();
    std::vector<std::vector<double>> weights(n_classes, std::vector<double>(dim, 0.0));
    std::vector<double> bias(n_classes, 0.0);

    // Each class owns an RNG stream derived from (seed, class index), so the
    // schedule below is identical whether classes run serially or in parallel.
    auto train_class = [&](int k) {
        std::vector<double>& w = weights[k];
        double& b = bias[k];
        Rng rng(Rng::mix(cfg.seed, static_cast<std::uint64_t>(k)));
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            double eta = cfg.lr / (1.0 + epoch);
            double decay = 1.0 - eta * cfg.l2;
            rng.shuffle(perm);
            for (int p : perm) {
                int i = rows[p];
                const std::vector<double>& x = data.x[i];
                double t = labels[i] == k ? 1.0 : -1.0;
                double margin = t * (dot(w, x) + b);
                if (margin < 1.0) {
                    for (size_t j = 0; j < dim; ++j) w[j] = w[j] * decay + eta * t * x[j];
                    b += eta * t;
                } else {
                    for (size_t j = 0; j < dim; ++j) w[j] *= decay;
                }
            }
        }
    };

    if (mode == ExecMode::Parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < n_classes; ++k) train_class(k);
    } else {
        for (int k = 0; k < n_classes; ++k) train_class(k);
    }
    return LinearSvmModel(std::move(classes), std::move(weights), std::move(bias));
}

namespace {

template <typename Model>
double accuracy_impl(const Model& model, const TrainingSet& data) {
    if (data.x.empty()) throw ValidationError("empty data set");
    int correct = 0;
    for (size_t i = 0; i < data.x.size(); ++i)
        if (model.predict(data.x[i]).label == data.y[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(data.x.size());
}

}  // namespace

double training_accuracy(const DecisionTreeModel& model, const TrainingSet& data) {
    return accuracy_impl(model, data);
}

double training_accuracy(const LinearSvmModel& model, const TrainingSet& data) {
    return accuracy_impl(model, data);
}

Prediction TriageModel::predict(std::span<const double> x) const {
    return kind == ModelKind::Tree ? tree.predict(x) : svm.predict(x);
}

const std::vector<std::string>& TriageModel::classes() const {
    return kind == ModelKind::Tree ? tree.classes() : svm.classes();
}

std::string serialize_model(const TriageModel& model) {
    check_token(model.window_start, "window start");
    check_token(model.window_end, "window end");
    std::string out = "otriage-model v1\n";
    out += std::string("kind\t") + (model.kind == ModelKind::Tree ? "tree" : "svm") + "\n";
    char hbuf[32];
    std::snprintf(hbuf, sizeof hbuf, "%016llx",
                  static_cast<unsigned long long>(model.schema_hash));
    out += std::string("schema\t") + hbuf + "\n";
    out += "window\t" + model.window_start + "\t" + model.window_end + "\t" +
           std::to_string(model.t_ms) + "\n";
    const std::vector<std::string>& classes = model.classes();
    out += "classes\t" + std::to_string(classes.size()) + "\n";
    for (size_t i = 0; i < classes.size(); ++i) {
        check_token(classes[i], "class name");
        out += "class\t" + std::to_string(i) + "\t" + classes[i] + "\n";
    }
    if (model.kind == ModelKind::Tree) {
        const auto& nodes = model.tree.nodes();
        out += "tree\tdim\t" + std::to_string(model.tree.dim()) + "\tnodes\t" +
               std::to_string(nodes.size()) + "\n";
        for (size_t i = 0; i < nodes.size(); ++i) {
            const TreeNode& node = nodes[i];
            if (node.is_leaf()) {
                out += "node\t" + std::to_string(i) + "\tleaf\t" +
                       std::to_string(node.dist.size()) + "\t";
                for (size_t k = 0; k < node.dist.size(); ++k) {
                    if (k) out += " ";
                    out += std::to_string(node.dist[k].first) + " " +
                           std::to_string(node.dist[k].second);
                }
                out += "\n";
            } else {
                out += "node\t" + std::to_string(i) + "\tsplit\t" +
                       std::to_string(node.column) + "\t" + hexf(node.threshold) + "\t" +
                       std::to_string(node.left) + "\t" + std::to_string(node.right) + "\n";
            }
        }
    } else {
        out += "svm\tdim\t" + std::to_string(model.svm.dim()) + "\n";
        const auto& weights = model.svm.weights();
        const auto& bias = model.svm.bias();
        for (size_t k = 0; k < weights.size(); ++k) {
            out += "w\t" + std::to_string(k) + "\t" + hexf(bias[k]) + "\t";
            for (size_t j = 0; j < weights[k].size(); ++j) {
                if (j) out += " ";
                out += hexf(weights[k][j]);
            }
            out += "\n";
        }
    }
    out += "end\n";
    return out;
}

TriageModel parse_model(const std::string& text, const std::string& origin) {
    std::vector<std::string> lines;
    {
        size_t start = 0;
        while (start <= text.size()) {
            size_t nl = text.find('\n', start);
            if (nl == std::string::npos) {
                if (start < text.size()) lines.push_back(text.substr(start));
                break;
            }
            lines.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
    }
    size_t ln = 0;
    auto next = [&]() -> const std::string& {
        if (ln >= lines.size()) throw ParseError(origin + ": truncated model file");
        return lines[ln++];
    };
    auto where = [&]() { return origin + ":" + std::to_string(ln); };

    if (next() != "otriage-model v1") throw ParseError(origin + ": bad header");

    TriageModel model;
    auto kind_f = split_tabs(next());
    if (kind_f.size() != 2 || kind_f[0] != "kind" || (kind_f[1] != "tree" && kind_f[1] != "svm"))
        throw ParseError(where() + ": bad kind line");
    model.kind = kind_f[1] == "tree" ? ModelKind::Tree : ModelKind::Svm;

    auto schema_f = split_tabs(next());
    if (schema_f.size() != 2 || schema_f[0] != "schema" || schema_f[1].size() != 16)
        throw ParseError(where() + ": bad schema line");
    {
        errno = 0;
        char* end = nullptr;
        model.schema_hash = std::strtoull(schema_f[1].c_str(), &end, 16);
        if (*end != '\0' || errno == ERANGE) throw ParseError(where() + ": bad schema hash");
    }

    auto window_f = split_tabs(next());
    if (window_f.size() != 4 || window_f[0] != "window" || window_f[1].empty() ||
        window_f[2].empty())
        throw ParseError(where() + ": bad window line");
    model.window_start = window_f[1];
    model.window_end = window_f[2];
    model.t_ms = parse_ll(window_f[3], where());
    if (model.t_ms <= 0) throw ParseError(where() + ": window scale must be positive");

    auto classes_f = split_tabs(next());
    if (classes_f.size() != 2 || classes_f[0] != "classes")
        throw ParseError(where() + ": bad classes line");
    long long n_classes = parse_ll(classes_f[1], where());
    if (n_classes < 1 || n_classes > 1'000'000)
        throw ParseError(where() + ": class count out of range");
    std::vector<std::string> classes;
    classes.reserve(static_cast<size_t>(n_classes));
    for (long long i = 0; i < n_classes; ++i) {
        auto f = split_tabs(next());
        if (f.size() != 3 || f[0] != "class" || parse_ll(f[1], where()) != i || f[2].empty())
            throw ParseError(where() + ": bad class line");
        classes.push_back(f[2]);
    }

    if (model.kind == ModelKind::Tree) {
        auto f = split_tabs(next());
        if (f.size() != 5 || f[0] != "tree" || f[1] != "dim" || f[3] != "nodes")
            throw ParseError(where() + ": bad tree line");
        long long dim = parse_ll(f[2], where());
        long long n_nodes = parse_ll(f[4], where());
        if (dim < 1 || n_nodes < 1) throw ParseError(where() + ": bad tree dimensions");
        std::vector<TreeNode> nodes;
        nodes.reserve(static_cast<size_t>(n_nodes));
        for (long long i = 0; i < n_nodes; ++i) {
            auto nf = split_tabs(next());
            if (nf.size() < 3 || nf[0] != "node" || parse_ll(nf[1], where()) != i)
                throw ParseError(where() + ": bad node line");
            TreeNode node;
            if (nf[2] == "split") {
                if (nf.size() != 7) throw ParseError(where() + ": bad split line");
                node.column = static_cast<int>(parse_ll(nf[3], where()));
                node.threshold = parse_hexf(nf[4], where());
                node.left = static_cast<int>(parse_ll(nf[5], where()));
                node.right = static_cast<int>(parse_ll(nf[6], where()));
            } else if (nf[2] == "leaf") {
                if (nf.size() != 5) throw ParseError(where() + ": bad leaf line");
                long long pairs = parse_ll(nf[3], where());
                auto toks = split_spaces(nf[4]);
                if (pairs < 1 || static_cast<long long>(toks.size()) != 2 * pairs)
                    throw ParseError(where() + ": bad leaf distribution");
                for (long long k = 0; k < pairs; ++k)
                    node.dist.emplace_back(
                        static_cast<int>(parse_ll(toks[2 * k], where())),
                        static_cast<int>(parse_ll(toks[2 * k + 1], where())));
            } else {
                throw ParseError(where() + ": unknown node type " + nf[2]);
            }
            nodes.push_back(std::move(node));
        }
        try {
            model.tree = DecisionTreeModel(std::move(classes), static_cast<size_t>(dim),
                                           std::move(nodes));
        } catch (const ValidationError& e) {
            throw ParseError(origin + ": " + e.what());
        }
    } else {
        auto f = split_tabs(next());
        if (f.size() != 3 || f[0] != "svm" || f[1] != "dim")
            throw ParseError(where() + ": bad svm line");
        long long dim = parse_ll(f[2], where());
        if (dim < 1) throw ParseError(where() + ": bad svm dimension");
        std::vector<std::vector<double>> weights;
        std::vector<double> bias;
        for (long long k = 0; k < n_classes; ++k) {
            auto wf = split_tabs(next());
            if (wf.size() != 4 || wf[0] != "w" || parse_ll(wf[1], where()) != k)
                throw ParseError(where() + ": bad weight line");
            bias.push_back(parse_hexf(wf[2], where()));
            auto toks = split_spaces(wf[3]);
            if (static_cast<long long>(toks.size()) != dim)
                throw ParseError(where() + ": weight row has wrong dimension");
            std::vector<double> w;
            w.reserve(static_cast<size_t>(dim));
            for (const auto& t : toks) w.push_back(parse_hexf(t, where()));
            weights.push_back(std::move(w));
        }
        try {
            model.svm = LinearSvmModel(std::move(classes), std::move(weights), std::move(bias));
        } catch (const ValidationError& e) {
            throw ParseError(origin + ": " + e.what());
        }
    }

    if (ln >= lines.size() || lines[ln] != "end")
        throw ParseError(origin + ": truncated model file");
    ++ln;
    for (; ln < lines.size(); ++ln)
        if (!lines[ln].empty()) throw ParseError(origin + ": trailing content after end");
    return model;
}

void save_model(const TriageModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open for writing: " + path);
    out << serialize_model(model);
    if (!out) throw ValidationError("write failed: " + path);
}

TriageModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str(), path);
}

}  // namespace otriage
