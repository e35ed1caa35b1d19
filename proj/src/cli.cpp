#include "tweetq/cli.hpp"

#include "tweetq/attribute_filter.hpp"
#include "tweetq/error.hpp"
#include "tweetq/metrics.hpp"
#include "tweetq/preprocess.hpp"
#include "tweetq/profiler.hpp"
#include "tweetq/sentiment.hpp"

#include "csv.hpp"
#include "tweetq/date.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace tweetq::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string flag_name(std::string key)
{
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
}

double parse_double(const std::string& key, const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(d))
        throw ArgumentError(key + ": expected a number, got '" + v + "'");
    return d;
}

long long parse_integer(const std::string& key, const std::string& v)
{
    errno = 0;
    char* end = nullptr;
    const long long n = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw ArgumentError(key + ": expected an integer, got '" + v + "'");
    return n;
}

std::uint64_t parse_seed(const std::string& v)
{
    if (!v.empty() && v[0] == '-')
        return static_cast<std::uint64_t>(parse_integer("seed", v));
    errno = 0;
    char* end = nullptr;
    const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw ArgumentError("seed: expected a 64-bit integer, got '" + v + "'");
    return n;
}

int parse_int(const std::string& key, const std::string& v)
{
    const long long n = parse_integer(key, v);
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
        throw ArgumentError(key + ": out of range");
    return static_cast<int>(n);
}

/// Attribute filter for `split`; nullopt keeps every tweet (the classic set).
std::optional<Attribute> parse_split_attribute(const std::string& v)
{
    if (v == "all")
        return std::nullopt;
    return parse_attribute(v);
}

enum class Mode { Time, Target };

Mode parse_mode(const std::string& v)
{
    if (v == "time")
        return Mode::Time;
    if (v == "target")
        return Mode::Target;
    throw ArgumentError("unknown mode '" + v + "' (expected time|target)");
}

std::ofstream open_out(const std::filesystem::path& p)
{
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + p.string() + "' for writing");
    return out;
}

void write_text(const std::filesystem::path& p, const std::string& text)
{
    auto out = open_out(p);
    out << text;
}

/// Numbers from the last column of a CSV with a header row.
std::vector<double> read_value_column(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + p.string() + "'");
    csv::Reader reader(in);
    std::vector<std::string> fields;
    std::vector<double> out;
    bool header = true;
    while (reader.next(fields)) {
        if (header) {
            header = false;
            continue;
        }
        if (fields.empty())
            continue;
        try {
            out.push_back(parse_double("value", trim(fields.back())));
        } catch (const ArgumentError& e) {
            throw ParseError(reader.line(), "value", e.what());
        }
    }
    return out;
}

struct PredictionFile {
    std::vector<double> actual;
    std::vector<double> predicted;
};

PredictionFile read_predictions(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + p.string() + "'");
    csv::Reader reader(in);
    std::vector<std::string> fields;
    PredictionFile out;
    if (!reader.next(fields) || fields.size() != 3 || fields[1] != "actual" || fields[2] != "predicted")
        throw ParseError(reader.line(), "header", "expected 'date,actual,predicted'");
    while (reader.next(fields)) {
        if (fields.size() != 3)
            throw ParseError(reader.line(), "row", "expected 3 fields");
        try {
            out.actual.push_back(parse_double("actual", trim(fields[1])));
            out.predicted.push_back(parse_double("predicted", trim(fields[2])));
        } catch (const ArgumentError& e) {
            throw ParseError(reader.line(), "value", e.what());
        }
    }
    return out;
}

std::string fmt_cents(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// ---- subcommands ---------------------------------------------------------

// Each command checks its inputs, then calls `begin()` before touching any
// file; ArgumentErrors raised before that point are usage errors.

int cmd_synth(const RunConfig& cfg, std::ostream& out, const std::function<void()>& begin)
{
    const SynthConfig sc = cfg.synth();
    const auto dir = cfg.path("out");
    const CorpusFormat fmt = cfg.format();
    begin();
    const SynthCorpus corpus = gen_corpus(sc);
    std::filesystem::create_directories(dir);
    const auto tweets_path = dir / (fmt == CorpusFormat::Csv ? "tweets.csv" : "tweets.jsonl");
    save_tweets(tweets_path, corpus.tweets, fmt);
    save_prices(dir / "prices.csv", corpus.prices);
    {
        auto lex = open_out(dir / "lexicon.tsv");
        Lexicon::builtin().write(lex);
    }
    ojson j;
    j["tweets"] = tweets_path.string();
    j["prices"] = (dir / "prices.csv").string();
    j["lexicon"] = (dir / "lexicon.tsv").string();
    j["tweet_count"] = corpus.tweets.size();
    j["days"] = corpus.prices.size();
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_preprocess(const RunConfig& cfg, std::ostream& out, const std::function<void()>& begin)
{
    const auto tweets_path = cfg.path("tweets");
    const auto prices_path = cfg.path("prices");
    const auto out_path = cfg.path("out");
    const CorpusFormat fmt = cfg.format();
    const double price_max = cfg.agent().price_max;
    begin();
    const PriceSeries prices = load_prices(prices_path, price_max);
    const TweetLoad load = load_tweets(tweets_path, fmt, TimeWindow::covering(prices));
    const auto bucketed = bucket_by_day(load.records, prices);
    const auto cleaned = clean_buckets(bucketed.buckets);
    std::size_t after_clean = 0;
    for (const auto& b : cleaned)
        after_clean += b.tweets.size();
    const auto deduped = dedup(cleaned);
    const auto records = to_records(deduped);
    {
        auto f = open_out(out_path);
        write_tweets(f, records, fmt);
    }
    ojson j;
    j["input"] = load.records.size() + load.out_of_window;
    j["out_of_window"] = load.out_of_window;
    j["empty_after_clean"] = load.records.size() - bucketed.dropped - after_clean;
    j["duplicates"] = after_clean - records.size();
    j["output"] = records.size();
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_split(const RunConfig& cfg, std::ostream& out, const std::function<void()>& begin)
{
    const auto tweets_path = cfg.path("tweets");
    const auto prices_path = cfg.path("prices");
    const auto out_path = cfg.path("out");
    const CorpusFormat fmt = cfg.format();
    const std::string attr_name = cfg.text("attribute", "followers");
    const auto attr = parse_split_attribute(attr_name);
    const double price_max = cfg.agent().price_max;
    begin();
    const PriceSeries prices = load_prices(prices_path, price_max);
    const TweetLoad load = load_tweets(tweets_path, fmt, TimeWindow::covering(prices));
    auto buckets = adopt_clean(bucket_by_day(load.records, prices).buckets);
    if (attr)
        buckets = build_dataset(buckets, *attr).buckets;
    const auto records = to_records(buckets);
    {
        auto f = open_out(out_path);
        write_tweets(f, records, fmt);
    }
    ojson meta;
    meta["attribute"] = attr_name;
    meta["input_tweets"] = load.records.size();
    meta["output_tweets"] = records.size();
    write_text(out_path.string() + ".meta.json", meta.dump(2) + "\n");
    out << meta.dump(2) << '\n';
    return 0;
}

Lexicon load_lexicon(const RunConfig& cfg)
{
    if (auto p = cfg.get("lexicon"))
        return Lexicon::load(*p);
    return Lexicon::builtin();
}

int cmd_sentiment(const RunConfig& cfg, std::ostream& out, const std::function<void()>& begin)
{
    const auto tweets_path = cfg.path("tweets");
    const auto prices_path = cfg.path("prices");
    const auto out_path = cfg.path("out");
    const CorpusFormat fmt = cfg.format();
    const double price_max = cfg.agent().price_max;
    begin();
    const Lexicon lex = load_lexicon(cfg);
    const PriceSeries prices = load_prices(prices_path, price_max);
    const TweetLoad load = load_tweets(tweets_path, fmt, TimeWindow::covering(prices));
    const auto buckets = adopt_clean(bucket_by_day(load.records, prices).buckets);
    const auto signals = daily_signals(buckets, lex);
    {
        auto f = open_out(out_path);
        write_signals(f, signals);
    }
    std::size_t scored = 0;
    for (const auto& s : signals)
        scored += s.tweet_count;
    ojson j;
    j["days"] = signals.size();
    j["tweets_scored"] = scored;
    out << j.dump(2) << '\n';
    return 0;
}

DataSplit load_split(const RunConfig& cfg, double price_max)
{
    const PriceSeries prices = load_prices(cfg.path("prices"), price_max);
    const auto signals = load_signals(cfg.path("signals"));
    const double fraction = cfg.number("train_fraction", 0.7);
    return split_train_test(prices, signals, train_length(prices.size(), fraction));
}

int cmd_train(const RunConfig& cfg, std::ostream& out, const std::function<void()>& begin)
{
    const AgentConfig ac = cfg.agent();
    const RewardKind kind = cfg.reward();
    cfg.path("prices");
    cfg.path("signals");
    const auto model_path = cfg.path("model");
    begin();
    const DataSplit split = load_split(cfg, ac.price_max);
    const TrainResult res = train(split.train_prices, split.train_signals, kind, ac);
    if (model_path.has_parent_path())
        std::filesystem::create_directories(model_path.parent_path());
    res.model.save(model_path);
    if (auto log_path = cfg.get("out")) {
        std::string text = "episode,mean_reward\n";
        char buf[64];
        for (std::size_t e = 0; e < res.log.mean_reward.size(); ++e) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g\n", e, res.log.mean_reward[e]);
            text += buf;
        }
        write_text(*log_path, text);
    }
    ojson j;
    j["reward"] = std::string(to_string(kind));
    j["state"] = std::string(to_string(ac.state_mode));
    j["episodes"] = res.log.mean_reward.size();
    j["train_days"] = split.train_prices.size();
    j["final_mean_reward"] = res.log.mean_reward.empty() ? 0.0 : res.log.mean_reward.back();
    j["model"] = model_path.string();
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, const std::function<void()>& begin)
{
    const auto model_path = cfg.path("model");
    cfg.path("prices");
    cfg.path("signals");
    const auto out_path = cfg.path("out");
    cfg.number("train_fraction", 0.7);
    begin();
    const QModel model = QModel::load(model_path);
    const DataSplit split = load_split(cfg, model.config().price_max);
    const auto pp = predict_series(model, split.test_prices, split.test_signals);
    std::string text = "date,actual,predicted\n";
    for (std::size_t t = 1; t < split.test_prices.size(); ++t) {
        text += format_date(split.test_prices[t].date) + "," + fmt_cents(split.test_prices[t].price) + "," +
                fmt_cents(pp[t - 1]) + "\n";
    }
    write_text(out_path, text);
    ojson j;
    j["predictions"] = pp.size();
    j["out"] = out_path.string();
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, const std::function<void()>& begin)
{
    const bool by_file = cfg.has("predictions");
    const bool by_pair = cfg.has("actual") || cfg.has("predicted");
    if (by_file == by_pair)
        throw ArgumentError("evaluate needs either --predictions or both --actual and --predicted");
    if (by_pair) {
        cfg.path("actual");
        cfg.path("predicted");
    }
    begin();
    PredictionFile data;
    if (by_file) {
        data = read_predictions(cfg.path("predictions"));
    } else {
        data.actual = read_value_column(cfg.path("actual"));
        data.predicted = read_value_column(cfg.path("predicted"));
    }
    const EvalReport report = evaluate(data.actual, data.predicted);
    out << report.to_table();
    if (auto p = cfg.get("out"))
        write_text(*p, report.to_json() + "\n");
    return 0;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, const std::function<void()>& begin)
{
    const auto tweets_path = cfg.path("tweets");
    const auto prices_path = cfg.path("prices");
    const CorpusFormat fmt = cfg.format();
    const BenchConfig bc = cfg.bench();
    const Mode mode = parse_mode(cfg.text("mode", "time"));
    double budget = 0.0, target = 0.0, timeout = 0.0;
    if (mode == Mode::Time) {
        budget = cfg.number("budget", 60.0);
        if (!(budget >= 10.0))
            throw ArgumentError("budget must be at least 10 seconds");
    } else {
        if (!cfg.has("target_vaf"))
            throw ArgumentError("--mode target needs --target-vaf");
        target = cfg.number("target_vaf", 0.0);
        timeout = cfg.number("timeout", 600.0);
        if (!(timeout > 0.0))
            throw ArgumentError("timeout must be positive");
    }
    begin();
    const Lexicon lex = load_lexicon(cfg);
    const PriceSeries prices = load_prices(prices_path, bc.agent.price_max);
    const TweetLoad load = load_tweets(tweets_path, fmt, TimeWindow::covering(prices));
    std::optional<QModel> warm;
    if (auto m = cfg.get("model"))
        warm = QModel::load(*m);
    const ComparisonReport report = mode == Mode::Time
                                        ? run_fixed_time(load.records, prices, lex, budget, bc)
                                        : run_to_target(load.records, prices, lex, target, timeout, bc, warm);
    const std::string json = report.to_json();
    if (auto p = cfg.get("out")) {
        write_text(*p, json + "\n");
        write_text(*p + ".classic.csv", report.classic.resources.to_csv());
        write_text(*p + ".proposed.csv", report.proposed.resources.to_csv());
    }
    out << json << '\n';
    return 0;
}

struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&, const std::function<void()>&);
};

const Command kCommands[] = {
    {"synth", "Generate a synthetic corpus, price series and lexicon", cmd_synth},
    {"preprocess", "Clean and deduplicate a tweet corpus", cmd_preprocess},
    {"split", "Keep each day's top half by an attribute", cmd_split},
    {"sentiment", "Score tweets and write daily signals", cmd_sentiment},
    {"train", "Train a Q-learning model on the training split", cmd_train},
    {"predict", "Predict the test split with a trained model", cmd_predict},
    {"evaluate", "Compute the six accuracy metrics", cmd_evaluate},
    {"compare", "Benchmark the classic and proposed pipelines", cmd_compare},
};

void write_error(std::ostream& err, const char* kind, const std::string& type, const std::string& message, int code)
{
    ojson j;
    j["error"] = kind;
    j["type"] = type;
    j["message"] = message;
    j["exit_code"] = code;
    err << j.dump() << '\n';
}

} // namespace

// ---- RunConfig -----------------------------------------------------------

const std::vector<std::string>& RunConfig::keys()
{
    static const std::vector<std::string> k = {
        "gamma", "theta", "action_min", "action_max", "epsilon_start", "epsilon_end", "episodes",
        "price_bucket_width", "price_max", "sentiment_bins", "seed", "state", "reward", "train_fraction",
        "days", "tweets_per_day", "rho", "base_price", "daily_vol", "tweets", "prices", "lexicon", "signals",
        "model", "predictions", "actual", "predicted", "out", "attribute", "format", "mode", "budget",
        "target_vaf", "timeout", "profile_interval",
    };
    return k;
}

bool RunConfig::is_key(std::string_view key)
{
    const auto& k = keys();
    return std::find(k.begin(), k.end(), key) != k.end();
}

void RunConfig::set(const std::string& key, std::string value)
{
    if (!is_key(key))
        throw ArgumentError("unknown config key '" + key + "'");
    values_[key] = std::move(value);
}

void RunConfig::merge(std::istream& in, const std::string& source)
{
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ArgumentError(source + ":" + std::to_string(n) + ": expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        if (!is_key(key))
            throw ArgumentError(source + ":" + std::to_string(n) + ": unknown config key '" + key + "'");
        values_[key] = trim(std::string_view(t).substr(eq + 1));
    }
}

void RunConfig::merge_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ArgumentError("cannot read config file '" + path.string() + "'");
    merge(in, path.string());
}

bool RunConfig::has(const std::string& key) const
{
    return values_.count(key) != 0;
}

std::optional<std::string> RunConfig::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        return std::nullopt;
    return it->second;
}

std::string RunConfig::text(const std::string& key, std::string fallback) const
{
    auto v = get(key);
    return v ? *v : std::move(fallback);
}

double RunConfig::number(const std::string& key, double fallback) const
{
    auto v = get(key);
    return v ? parse_double(key, *v) : fallback;
}

long long RunConfig::integer(const std::string& key, long long fallback) const
{
    auto v = get(key);
    return v ? parse_integer(key, *v) : fallback;
}

std::filesystem::path RunConfig::path(const std::string& key) const
{
    auto v = get(key);
    if (!v || v->empty())
        throw ArgumentError("missing required " + flag_name(key));
    return *v;
}

AgentConfig RunConfig::agent() const
{
    AgentConfig a;
    a.gamma = number("gamma", a.gamma);
    a.theta = number("theta", a.theta);
    if (auto v = get("action_min"))
        a.action_min = parse_int("action_min", *v);
    if (auto v = get("action_max"))
        a.action_max = parse_int("action_max", *v);
    a.epsilon_start = number("epsilon_start", a.epsilon_start);
    a.epsilon_end = number("epsilon_end", a.epsilon_end);
    if (auto v = get("episodes"))
        a.episodes = parse_int("episodes", *v);
    a.price_bucket_width = number("price_bucket_width", a.price_bucket_width);
    a.price_max = number("price_max", a.price_max);
    if (auto v = get("sentiment_bins"))
        a.sentiment_bins = parse_int("sentiment_bins", *v);
    if (auto v = get("seed"))
        a.seed = parse_seed(*v);
    if (auto v = get("state"))
        a.state_mode = parse_state_mode(*v);
    a.validate();
    return a;
}

SynthConfig RunConfig::synth() const
{
    SynthConfig s;
    if (auto v = get("days"))
        s.days = parse_int("days", *v);
    if (auto v = get("tweets_per_day"))
        s.tweets_per_day = parse_int("tweets_per_day", *v);
    s.rho = number("rho", s.rho);
    s.base_price = number("base_price", s.base_price);
    s.daily_vol = number("daily_vol", s.daily_vol);
    if (auto v = get("seed"))
        s.seed = parse_seed(*v);
    s.validate();
    return s;
}

BenchConfig RunConfig::bench() const
{
    BenchConfig b;
    b.agent = agent();
    b.reward = reward();
    if (auto v = get("attribute"))
        b.attribute = parse_attribute(*v);
    b.train_fraction = number("train_fraction", b.train_fraction);
    b.profile_interval = number("profile_interval", b.profile_interval);
    if (!(b.profile_interval > 0.0))
        throw ArgumentError("profile_interval must be positive");
    return b;
}

RewardKind RunConfig::reward() const
{
    return parse_reward_kind(text("reward", "cdr"));
}

CorpusFormat RunConfig::format() const
{
    return parse_corpus_format(text("format", "csv"));
}

void RunConfig::validate() const
{
    agent();
    synth();
    reward();
    format();
    if (auto v = get("attribute"))
        parse_split_attribute(*v);
    if (auto v = get("mode"))
        parse_mode(*v);
    const double f = number("train_fraction", 0.7);
    if (!(f > 0.0 && f < 1.0))
        throw ArgumentError("train_fraction must lie in (0, 1)");
    for (const char* k : {"budget", "target_vaf", "timeout", "profile_interval"})
        number(k, 0.0);
    if (has("profile_interval") && !(number("profile_interval", 0.0) > 0.0))
        throw ArgumentError("profile_interval must be positive");
}

// ---- entry point -----------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Tweet-attribute sentiment and Q-learning price prediction", "tweetq"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::map<std::string, std::string> flag_values;
    std::string config_path;
    std::map<std::string, CLI::Option*> flag_opts;
    std::map<std::string, CLI::Option*> config_opts;
    std::map<std::string, CLI::App*> subs;

    for (const auto& c : kCommands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        subs[c.name] = sub;
        config_opts[c.name] = sub->add_option("--config", config_path, "key = value config file");
        for (const auto& key : RunConfig::keys()) {
            auto* opt = sub->add_option(flag_name(key), flag_values[key], "config key " + key);
            flag_opts[std::string(c.name) + "/" + key] = opt;
        }
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        write_error(err, "usage", e.get_name(), e.what(), 2);
        err << app.help();
        return 2;
    }

    const Command* chosen = nullptr;
    for (const auto& c : kCommands) {
        if (subs[c.name]->parsed())
            chosen = &c;
    }

    bool working = false;
    try {
        RunConfig cfg;
        if (config_opts[chosen->name]->count() > 0)
            cfg.merge_file(config_path);
        for (const auto& key : RunConfig::keys()) {
            if (flag_opts[std::string(chosen->name) + "/" + key]->count() > 0)
                cfg.set(key, flag_values[key]);
        }
        cfg.validate();
        return chosen->fn(cfg, out, [&] { working = true; });
    } catch (const ArgumentError& e) {
        const int code = working ? 1 : 2;
        write_error(err, working ? "runtime" : "usage", "ArgumentError", e.what(), code);
        if (!working)
            err << "run 'tweetq " << chosen->name << " --help' for the list of options\n";
        return code;
    } catch (const ParseError& e) {
        write_error(err, "runtime", "ParseError", e.what(), 1);
        return 1;
    } catch (const ValidationError& e) {
        write_error(err, "runtime", "ValidationError", e.what(), 1);
        return 1;
    } catch (const UnsupportedPlatform& e) {
        write_error(err, "runtime", "UnsupportedPlatform", e.what(), 1);
        return 1;
    } catch (const std::exception& e) {
        write_error(err, "runtime", "Error", e.what(), 1);
        return 1;
    }
}

} // namespace tweetq::cli
