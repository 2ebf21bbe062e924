#include "dnstun/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "dnstun/error.hpp"
#include "dnstun/rng.hpp"

namespace dnstun {

namespace {

const std::array<std::string, 4> kTaskNames{
    "detection", "tool", "scenario", "general-scenario",
};

constexpr std::size_t kNumFeatures = metrics::kMetricCount;

}  // namespace

const std::string& task_name(TaskKind t) {
    return kTaskNames[static_cast<std::size_t>(t)];
}

std::optional<TaskKind> task_parse(const std::string& name) {
    for (std::size_t i = 0; i < kTaskNames.size(); ++i)
        if (kTaskNames[i] == name) return static_cast<TaskKind>(i);
    return std::nullopt;
}

std::optional<std::string> task_label(const Label& label, TaskKind task,
                                      bool malicious_only) {
    const bool legit = label.tool == ToolClass::Legitimate;
    switch (task) {
        case TaskKind::Detection:
            return legit ? "Legitimate" : "Malicious";
        case TaskKind::ToolIdentification:
            return tool_class_name(label.tool);
        case TaskKind::ScenarioIdentification:
            if (legit) {
                if (malicious_only) return std::nullopt;
                return "Legitimate";
            }
            if (label.action == ActionClass::Handshake) return std::nullopt;
            return tool_class_name(label.tool) + "/" + action_class_name(label.action);
        case TaskKind::GeneralScenario:
            if (legit || label.action == ActionClass::Handshake) return std::nullopt;
            return action_class_name(label.action);
    }
    return std::nullopt;
}

std::vector<std::string> task_classes(const Dataset& ds, TaskKind task,
                                      bool malicious_only) {
    std::set<std::string> present;
    for (const FeatureVector& r : ds.rows) {
        if (!r.label) continue;
        if (auto c = task_label(*r.label, task, malicious_only)) present.insert(*c);
    }
    std::vector<std::string> canonical;
    switch (task) {
        case TaskKind::Detection:
            canonical = {"Legitimate", "Malicious"};
            break;
        case TaskKind::ToolIdentification:
            for (int i = 0; i < kToolClassCount; ++i)
                canonical.push_back(tool_class_name(static_cast<ToolClass>(i)));
            break;
        case TaskKind::ScenarioIdentification:
            canonical.push_back("Legitimate");
            for (int t = 1; t < kToolClassCount; ++t)
                for (ActionClass a : {ActionClass::KeepAlive, ActionClass::Upload,
                                      ActionClass::Download})
                    canonical.push_back(tool_class_name(static_cast<ToolClass>(t)) + "/" +
                                        action_class_name(a));
            break;
        case TaskKind::GeneralScenario:
            for (ActionClass a :
                 {ActionClass::KeepAlive, ActionClass::Upload, ActionClass::Download})
                canonical.push_back(action_class_name(a));
            break;
    }
    std::vector<std::string> out;
    for (const std::string& c : canonical)
        if (present.count(c)) out.push_back(c);
    return out;
}

namespace {

struct TaskView {
    std::vector<const FeatureVector*> rows;
    std::vector<std::uint16_t> row_class;
    std::vector<std::string> classes;
};

TaskView make_view(const Dataset& ds, TaskKind task, bool malicious_only) {
    TaskView view;
    view.classes = task_classes(ds, task, malicious_only);
    std::map<std::string, std::uint16_t> index;
    for (std::size_t i = 0; i < view.classes.size(); ++i)
        index[view.classes[i]] = static_cast<std::uint16_t>(i);
    for (const FeatureVector& r : ds.rows) {
        if (!r.label)
            throw TrainError(TrainError::Kind::UnlabeledRow,
                             "dataset contains unlabeled rows");
        const auto c = task_label(*r.label, task, malicious_only);
        if (!c) continue;
        view.rows.push_back(&r);
        view.row_class.push_back(index.at(*c));
    }
    if (view.rows.empty())
        throw TrainError(TrainError::Kind::EmptyDataset,
                         "no rows usable for task " + task_name(task));
    if (view.classes.size() < 2)
        throw TrainError(TrainError::Kind::SingleClass,
                         "task " + task_name(task) + " has a single class");
    return view;
}

class TreeBuilder {
public:
    TreeBuilder(const TaskView& view, const TrainConfig& cfg, Rng rng)
        : view_(view), cfg_(cfg), rng_(rng), n_classes_(view.classes.size()) {}

    std::vector<TreeNode> build() {
        const std::size_t n = view_.rows.size();
        std::vector<std::uint32_t> sample(n);
        if (cfg_.bootstrap) {
            for (auto& s : sample)
                s = static_cast<std::uint32_t>(rng_.uniform_index(n));
        } else {
            for (std::size_t i = 0; i < n; ++i) sample[i] = static_cast<std::uint32_t>(i);
        }
        nodes_.clear();
        grow(std::move(sample), 0);
        return std::move(nodes_);
    }

private:
    std::vector<std::uint32_t> count_classes(const std::vector<std::uint32_t>& sample) const {
        std::vector<std::uint32_t> counts(n_classes_, 0);
        for (std::uint32_t idx : sample) ++counts[view_.row_class[idx]];
        return counts;
    }

    // Split quality proxy: sum over sides of (sum of squared class counts) /
    // side size. Maximizing it minimizes the weighted Gini impurity.
    static double purity_score(const std::vector<std::uint32_t>& counts,
                               std::size_t total) {
        if (total == 0) return 0.0;
        double s = 0.0;
        for (std::uint32_t c : counts) s += static_cast<double>(c) * c;
        return s / static_cast<double>(total);
    }

    std::size_t make_leaf(const std::vector<std::uint32_t>& counts) {
        TreeNode node;
        node.class_counts = counts;
        nodes_.push_back(std::move(node));
        return nodes_.size() - 1;
    }

    std::size_t grow(std::vector<std::uint32_t> sample, std::uint32_t depth) {
        const auto counts = count_classes(sample);
        const std::size_t n = sample.size();
        const bool pure =
            std::count_if(counts.begin(), counts.end(),
                          [](std::uint32_t c) { return c > 0; }) <= 1;
        if (pure || (cfg_.max_depth > 0 && depth >= cfg_.max_depth) ||
            n < 2 * static_cast<std::size_t>(cfg_.min_samples_leaf))
            return make_leaf(counts);

        const auto feature_subset =
            rng_.sample_indices(std::min<std::size_t>(cfg_.features_per_split, kNumFeatures),
                                kNumFeatures);

        // Best split over candidate features; thresholds are midpoints of
        // consecutive distinct values. Ties resolve to the lowest feature
        // index then lowest threshold because iteration is ascending and
        // only strict improvements are accepted.
        const double parent_score = purity_score(counts, n);
        double best_score = parent_score + 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;

        std::vector<std::pair<double, std::uint16_t>> vals(n);
        for (std::size_t f : feature_subset) {
            for (std::size_t i = 0; i < n; ++i)
                vals[i] = {view_.rows[sample[i]]->values[f], view_.row_class[sample[i]]};
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            std::vector<std::uint32_t> left(n_classes_, 0);
            std::vector<std::uint32_t> right = counts;
            double left_sq = 0.0, right_sq = 0.0;
            for (std::uint32_t c : right) right_sq += static_cast<double>(c) * c;
            std::size_t nl = 0;
            std::size_t i = 0;
            while (i < n) {
                // advance over one group of equal values
                const double v = vals[i].first;
                while (i < n && vals[i].first == v) {
                    const std::uint16_t c = vals[i].second;
                    left_sq += 2.0 * left[c] + 1.0;
                    right_sq -= 2.0 * right[c] - 1.0;
                    ++left[c];
                    --right[c];
                    ++nl;
                    ++i;
                }
                if (i == n) break;
                const std::size_t nr = n - nl;
                if (nl < cfg_.min_samples_leaf || nr < cfg_.min_samples_leaf) continue;
                const double score = left_sq / static_cast<double>(nl) +
                                     right_sq / static_cast<double>(nr);
                if (score > best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold = (v + vals[i].first) / 2.0;
                }
            }
        }

        if (best_feature < 0) return make_leaf(counts);

        std::vector<std::uint32_t> left_sample, right_sample;
        for (std::uint32_t idx : sample) {
            if (view_.rows[idx]->values[static_cast<std::size_t>(best_feature)] <=
                best_threshold)
                left_sample.push_back(idx);
            else
                right_sample.push_back(idx);
        }
        sample.clear();
        sample.shrink_to_fit();

        const std::size_t me = nodes_.size();
        nodes_.emplace_back();
        nodes_[me].feature = static_cast<std::int16_t>(best_feature);
        nodes_[me].threshold = best_threshold;
        const std::size_t l = grow(std::move(left_sample), depth + 1);
        const std::size_t r = grow(std::move(right_sample), depth + 1);
        nodes_[me].left = static_cast<std::uint32_t>(l);
        nodes_[me].right = static_cast<std::uint32_t>(r);
        return me;
    }

    const TaskView& view_;
    const TrainConfig& cfg_;
    Rng rng_;
    std::size_t n_classes_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

ForestModel train(const Dataset& ds, TaskKind task, const TrainConfig& cfg,
                  bool malicious_only) {
    if (ds.rows.empty())
        throw TrainError(TrainError::Kind::EmptyDataset, "empty dataset");
    const TaskView view = make_view(ds, task, malicious_only);

    ForestModel model;
    model.task = task;
    model.classes = view.classes;
    model.hyperparams = cfg;
    model.trees.resize(cfg.n_trees);

    unsigned threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, cfg.n_trees));

    std::atomic<std::uint32_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint32_t t = next.fetch_add(1);
            if (t >= cfg.n_trees) return;
            TreeBuilder builder(view, cfg, Rng(derive_seed(cfg.seed, t)));
            model.trees[t] = builder.build();
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }
    return model;
}

std::vector<double> predict_proba(const ForestModel& model,
                                  const std::array<double, metrics::kMetricCount>& values) {
    if (model.trees.empty()) throw Error("model has no trees");
    std::vector<double> proba(model.classes.size(), 0.0);
    for (const auto& tree : model.trees) {
        std::size_t node = 0;
        while (!tree[node].is_leaf()) {
            const TreeNode& nd = tree[node];
            node = values[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                                : nd.right;
        }
        const auto& counts = tree[node].class_counts;
        double total = 0.0;
        for (std::uint32_t c : counts) total += c;
        for (std::size_t i = 0; i < counts.size(); ++i)
            proba[i] += counts[i] / total;
    }
    for (double& p : proba) p /= static_cast<double>(model.trees.size());
    return proba;
}

const std::string& predict(const ForestModel& model,
                           const std::array<double, metrics::kMetricCount>& values) {
    const auto proba = predict_proba(model, values);
    std::size_t best = 0;
    for (std::size_t i = 1; i < proba.size(); ++i)
        if (proba[i] > proba[best]) best = i;
    return model.classes[best];
}

namespace {

constexpr const char* kMagic = "DMF";
constexpr int kFormatVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 4);
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
    char b[4];
    if (!in.read(b, 4))
        throw ModelError(ModelError::Kind::Corrupt, "unexpected end of file");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
}

double get_f64(std::istream& in) {
    char b[8];
    if (!in.read(b, 8))
        throw ModelError(ModelError::Kind::Corrupt, "unexpected end of file");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::uint8_t get_u8(std::istream& in) {
    char b;
    if (!in.get(b))
        throw ModelError(ModelError::Kind::Corrupt, "unexpected end of file");
    return static_cast<std::uint8_t>(b);
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

}  // namespace

void save(const ForestModel& model, std::ostream& out) {
    for (const std::string& c : model.classes)
        if (c.find_first_of(", \n") != std::string::npos)
            throw Error("class name not serializable: " + c);
    const TrainConfig& h = model.hyperparams;
    out << kMagic << ' ' << kFormatVersion << " task=" << task_name(model.task)
        << " feature_set=" << model.feature_set_version
        << " classes=" << join(model.classes, ',') << " n_trees=" << h.n_trees
        << " max_depth=" << h.max_depth << " min_samples_leaf=" << h.min_samples_leaf
        << " features_per_split=" << h.features_per_split
        << " bootstrap=" << (h.bootstrap ? 1 : 0) << " seed=" << h.seed << '\n';

    put_u32(out, static_cast<std::uint32_t>(model.trees.size()));
    for (const auto& tree : model.trees) {
        put_u32(out, static_cast<std::uint32_t>(tree.size()));
        for (const TreeNode& nd : tree) {
            if (nd.is_leaf()) {
                out.put(1);
                for (std::uint32_t c : nd.class_counts) put_u32(out, c);
            } else {
                out.put(0);
                out.put(static_cast<char>(nd.feature));
                put_f64(out, nd.threshold);
                put_u32(out, nd.left);
                put_u32(out, nd.right);
            }
        }
    }
}

std::vector<std::uint8_t> save_bytes(const ForestModel& model) {
    std::ostringstream os(std::ios::binary);
    save(model, os);
    const std::string s = os.str();
    return {s.begin(), s.end()};
}

ForestModel load(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.size() < 5 ||
        header.compare(0, 4, std::string(kMagic) + " ") != 0)
        throw ModelError(ModelError::Kind::BadMagic, "not a model file");

    std::istringstream hs(header.substr(4));
    int version = -1;
    hs >> version;
    if (version != kFormatVersion)
        throw ModelError(ModelError::Kind::UnsupportedVersion,
                         "format version " + std::to_string(version));

    ForestModel model;
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ModelError(ModelError::Kind::Corrupt, "malformed header token " + tok);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "task") {
            const auto t = task_parse(val);
            if (!t) throw ModelError(ModelError::Kind::Corrupt, "unknown task " + val);
            model.task = *t;
        } else if (key == "feature_set") {
            model.feature_set_version = val;
        } else if (key == "classes") {
            std::string cur;
            for (char c : val) {
                if (c == ',') {
                    model.classes.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(c);
                }
            }
            if (!cur.empty()) model.classes.push_back(cur);
        } else if (key == "n_trees") {
            model.hyperparams.n_trees = std::stoul(val);
        } else if (key == "max_depth") {
            model.hyperparams.max_depth = std::stoul(val);
        } else if (key == "min_samples_leaf") {
            model.hyperparams.min_samples_leaf = std::stoul(val);
        } else if (key == "features_per_split") {
            model.hyperparams.features_per_split = std::stoul(val);
        } else if (key == "bootstrap") {
            model.hyperparams.bootstrap = val != "0";
        } else if (key == "seed") {
            model.hyperparams.seed = std::stoull(val);
        }
        // unknown keys ignored for forward compatibility
    }
    if (model.classes.empty())
        throw ModelError(ModelError::Kind::Corrupt, "no classes in header");

    const std::uint32_t n_trees = get_u32(in);
    if (n_trees == 0) throw ModelError(ModelError::Kind::Corrupt, "zero trees");
    model.trees.resize(n_trees);
    for (auto& tree : model.trees) {
        const std::uint32_t n_nodes = get_u32(in);
        if (n_nodes == 0) throw ModelError(ModelError::Kind::Corrupt, "empty tree");
        tree.resize(n_nodes);
        for (std::uint32_t i = 0; i < n_nodes; ++i) {
            TreeNode& nd = tree[i];
            const std::uint8_t tag = get_u8(in);
            if (tag == 1) {
                nd.feature = -1;
                nd.class_counts.resize(model.classes.size());
                std::uint64_t total = 0;
                for (auto& c : nd.class_counts) {
                    c = get_u32(in);
                    total += c;
                }
                if (total == 0)
                    throw ModelError(ModelError::Kind::Corrupt, "leaf with zero counts");
            } else if (tag == 0) {
                nd.feature = get_u8(in);
                if (nd.feature >= static_cast<std::int16_t>(kNumFeatures))
                    throw ModelError(ModelError::Kind::Corrupt, "feature index out of range");
                nd.threshold = get_f64(in);
                if (!std::isfinite(nd.threshold))
                    throw ModelError(ModelError::Kind::Corrupt, "non-finite threshold");
                nd.left = get_u32(in);
                nd.right = get_u32(in);
                // children always follow their parent in preorder
                if (nd.left <= i || nd.right <= i || nd.left >= n_nodes ||
                    nd.right >= n_nodes)
                    throw ModelError(ModelError::Kind::Corrupt, "bad child index");
            } else {
                throw ModelError(ModelError::Kind::Corrupt, "bad node tag");
            }
        }
    }
    return model;
}

ForestModel load_bytes(const std::vector<std::uint8_t>& bytes) {
    std::istringstream is(std::string(bytes.begin(), bytes.end()), std::ios::binary);
    ForestModel m = load(is);
    is.peek();
    if (!is.eof()) throw ModelError(ModelError::Kind::Corrupt, "trailing data");
    return m;
}

}  // namespace dnstun
