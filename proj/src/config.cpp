#include "anderson/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "anderson/io.hpp"

namespace anderson {

const char* to_string(TaskKind kind) {
    switch (kind) {
    case TaskKind::Msa: return "msa";
    case TaskKind::Decay: return "decay";
    case TaskKind::Moment: return "moment";
    case TaskKind::Spectrum: return "spectrum";
    }
    return "unknown";
}

std::optional<TaskKind> parse_task_kind(std::string_view text) {
    for (auto kind : {TaskKind::Msa, TaskKind::Decay, TaskKind::Moment, TaskKind::Spectrum})
        if (text == to_string(kind))
            return kind;
    return std::nullopt;
}

std::vector<int> ExperimentConfig::msa_scales() const {
    if (!task.L_values.empty())
        return task.L_values;
    if (task.L0 > 0 && task.scale_count > 0)
        return scale_sequence(task.L0, task.scale_count, task.alpha);
    return {};
}

MsaParams ExperimentConfig::msa_params() const {
    MsaParams p;
    p.N = model.N;
    p.n = model.n;
    p.d = model.d;
    p.h = model.h;
    p.dense_limit = model.dense_limit;
    p.m = task.m;
    p.p = task.p;
    p.interval = {task.E_lo, task.E_hi};
    p.grid_step = task.grid_step;
    p.L_values = msa_scales();
    p.mode = task.mode;
    p.realizations = run.realizations;
    p.master_seed = run.master_seed;
    p.workers = run.workers;
    return p;
}

namespace {

std::string describe(const std::vector<ConfigDiagnostic>& diagnostics) {
    std::ostringstream msg;
    msg << "invalid configuration:";
    for (const auto& d : diagnostics) {
        msg << "\n  ";
        if (d.line > 0)
            msg << "line " << d.line << ": ";
        if (!d.key.empty())
            msg << d.key << ": ";
        msg << d.message;
    }
    return msg.str();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
std::optional<T> parse_number(std::string_view text) {
    T value{};
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    if (!text.empty() && text.front() == '+')
        ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || begin == end)
        return std::nullopt;
    return value;
}

template <class T>
std::optional<std::vector<T>> parse_list(std::string_view text) {
    std::vector<T> out;
    if (trim(text).empty())
        return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        const auto value = parse_number<T>(item);
        if (!value)
            return std::nullopt;
        out.push_back(*value);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

struct Entry {
    std::string value;
    int line;
};

class Parser {
public:
    explicit Parser(std::string_view text) { tokenize(text); }

    ExperimentConfig parse() {
        ExperimentConfig config;
        parse_kinds(config);
        for (const auto& [key, entry] : entries_)
            assign(config, key, entry);
        if (diagnostics_.empty())
            check_constraints(config);
        if (!diagnostics_.empty())
            throw ConfigError(diagnostics_);
        return config;
    }

private:
    void tokenize(std::string_view text) {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto nl = text.find('\n', pos);
            auto line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                error(line_no, "", "expected 'section.key = value'");
                continue;
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.find('.') == std::string::npos || key.front() == '.' || key.back() == '.') {
                error(line_no, key, "keys have the form section.key");
                continue;
            }
            if (const auto it = entries_.find(key); it != entries_.end()) {
                error(line_no, key,
                      "duplicate key (lines " + std::to_string(it->second.line) + " and " +
                          std::to_string(line_no) + ")");
                continue;
            }
            entries_.emplace(key, Entry{value, line_no});
        }
    }

    void error(int line, std::string key, std::string message) {
        diagnostics_.push_back({line, std::move(key), std::move(message)});
    }

    int line_of(const std::string& key) const {
        const auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void parse_kinds(ExperimentConfig& config) {
        if (const auto it = entries_.find("disorder.kind"); it != entries_.end()) {
            const auto& v = it->second.value;
            if (v == "bernoulli")
                config.disorder = DisorderSpec::bernoulli(0.0, 1.0, 0.5);
            else if (v == "finite_discrete")
                config.disorder = DisorderSpec::finite_discrete({}, {});
            else if (v == "uniform")
                config.disorder = DisorderSpec::uniform(0.0, 1.0);
            else
                error(it->second.line, it->first, "unsupported kind '" + v + "'");
        }
        if (const auto it = entries_.find("interaction.kind"); it != entries_.end()) {
            const auto& v = it->second.value;
            if (v == "subexponential")
                config.interaction.kind = InteractionKind::SubExponential;
            else if (v == "finite_range")
                config.interaction.kind = InteractionKind::FiniteRange;
            else
                error(it->second.line, it->first, "unsupported kind '" + v + "'");
        }
    }

    template <class T>
    void number(const std::string& key, const Entry& e, T& target) {
        if (const auto v = parse_number<T>(e.value))
            target = *v;
        else
            error(e.line, key, "cannot parse '" + e.value + "' as a number");
    }

    template <class T>
    void list(const std::string& key, const Entry& e, std::vector<T>& target) {
        if (auto v = parse_list<T>(e.value))
            target = std::move(*v);
        else
            error(e.line, key, "cannot parse '" + e.value + "' as a comma-separated list");
    }

    void not_for_kind(const std::string& key, const Entry& e, const char* kind) {
        error(e.line, key, std::string("not used by kind ") + kind);
    }

    void assign(ExperimentConfig& c, const std::string& key, const Entry& e) {
        auto& dis = c.disorder;
        const bool bern = dis.kind == DisorderKind::Bernoulli;
        const bool fin = dis.kind == DisorderKind::FiniteDiscrete;
        const bool uni = dis.kind == DisorderKind::Uniform;

        if (key == "model.N") number(key, e, c.model.N);
        else if (key == "model.n") number(key, e, c.model.n);
        else if (key == "model.d") number(key, e, c.model.d);
        else if (key == "model.h") number(key, e, c.model.h);
        else if (key == "model.dense_limit") number(key, e, c.model.dense_limit);
        else if (key == "disorder.kind" || key == "interaction.kind") {
        } else if (key == "disorder.amplitude") number(key, e, dis.amplitude);
        else if (key == "disorder.low" || key == "disorder.high") {
            if (!(bern || uni))
                return not_for_kind(key, e, to_string(dis.kind));
            number(key, e, dis.values[key == "disorder.low" ? 0 : 1]);
        } else if (key == "disorder.q") {
            if (!bern)
                return not_for_kind(key, e, to_string(dis.kind));
            double q = 0.5;
            number(key, e, q);
            dis.probabilities = {1.0 - q, q};
        } else if (key == "disorder.values" || key == "disorder.probabilities") {
            if (!fin)
                return not_for_kind(key, e, to_string(dis.kind));
            list(key, e, key == "disorder.values" ? dis.values : dis.probabilities);
        } else if (key == "interaction.C") number(key, e, c.interaction.C);
        else if (key == "interaction.c") number(key, e, c.interaction.c);
        else if (key == "interaction.tau") number(key, e, c.interaction.tau);
        else if (key == "interaction.range") {
            if (c.interaction.kind != InteractionKind::FiniteRange)
                return not_for_kind(key, e, to_string(c.interaction.kind));
            number(key, e, c.interaction.range);
        } else if (key == "task.kind") {
            if (const auto k = parse_task_kind(e.value))
                c.task.kind = k;
            else
                error(e.line, key, "unknown task '" + e.value + "'");
        } else if (key == "task.m") number(key, e, c.task.m);
        else if (key == "task.p") number(key, e, c.task.p);
        else if (key == "task.E_lo") number(key, e, c.task.E_lo);
        else if (key == "task.E_hi") number(key, e, c.task.E_hi);
        else if (key == "task.grid_step") number(key, e, c.task.grid_step);
        else if (key == "task.L_values") list(key, e, c.task.L_values);
        else if (key == "task.L0") number(key, e, c.task.L0);
        else if (key == "task.scale_count") number(key, e, c.task.scale_count);
        else if (key == "task.alpha") number(key, e, c.task.alpha);
        else if (key == "task.mode") {
            if (e.value == "monte_carlo")
                c.task.mode = MsaMode::MonteCarlo;
            else if (e.value == "exact_bernoulli")
                c.task.mode = MsaMode::ExactBernoulli;
            else
                error(e.line, key, "unknown mode '" + e.value + "'");
        } else if (key == "task.L") number(key, e, c.task.L);
        else if (key == "task.s") number(key, e, c.task.s);
        else if (key == "task.K_radius") number(key, e, c.task.K_radius);
        else if (key == "task.vertex_limit") number(key, e, c.task.vertex_limit);
        else if (key == "run.master_seed") number(key, e, c.run.master_seed);
        else if (key == "run.realizations") number(key, e, c.run.realizations);
        else if (key == "run.workers") number(key, e, c.run.workers);
        else if (key == "run.output") {
            if (e.value.empty())
                error(e.line, key, "output path must not be empty");
            c.run.output = e.value;
        } else
            error(e.line, key, "unknown key");
    }

    void check_constraints(const ExperimentConfig& c) {
        const auto require = [this](bool ok, const std::string& key, const std::string& message) {
            if (!ok)
                error(line_of(key), key, message);
        };
        require(c.model.N >= 1, "model.N", "must be >= 1");
        require(c.model.n >= 1 && c.model.n <= c.model.N, "model.n", "must satisfy 1 <= n <= N");
        require(c.model.d >= 1, "model.d", "must be >= 1");
        require(c.model.dense_limit >= 1, "model.dense_limit", "must be >= 1");
        try {
            c.disorder.validate();
        } catch (const std::invalid_argument& e) {
            error(line_of("disorder.kind"), "disorder", e.what());
        }
        try {
            c.interaction.validate();
        } catch (const std::invalid_argument& e) {
            error(line_of("interaction.kind"), "interaction", e.what());
        }
        require(c.task.m > 0.0, "task.m", "must be positive");
        require(c.task.E_lo <= c.task.E_hi, "task.E_hi", "must be >= task.E_lo");
        require(c.task.grid_step > 0.0, "task.grid_step", "must be positive");
        for (int L : c.task.L_values)
            require(L >= 1, "task.L_values", "scales must be >= 1");
        require(c.task.L0 == 0 || c.task.L0 >= 2, "task.L0", "must be >= 2");
        require(c.task.scale_count >= 0, "task.scale_count", "must be >= 0");
        require(c.task.alpha > 1.0, "task.alpha", "must exceed 1");
        require(c.task.L >= 0, "task.L", "must be >= 0");
        require(c.task.s >= 0.0, "task.s", "only s >= 0 is supported");
        require(c.task.K_radius >= 0 && c.task.K_radius <= c.task.L, "task.K_radius",
                "must satisfy 0 <= K_radius <= L");
        require(c.task.vertex_limit <= 30, "task.vertex_limit", "must be <= 30");
        require(c.run.realizations >= 1, "run.realizations", "must be >= 1");
    }

    std::map<std::string, Entry> entries_;
    std::vector<ConfigDiagnostic> diagnostics_;
};

}  // namespace

ConfigError::ConfigError(std::vector<ConfigDiagnostic> diagnostics)
    : std::runtime_error(describe(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ExperimentConfig parse_config(std::string_view text) {
    return Parser(text).parse();
}

namespace {

template <class T>
std::string join(const std::vector<T>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += format_double(items[i]);
        else
            out += std::to_string(items[i]);
    }
    return out;
}

}  // namespace

std::string print_config(const ExperimentConfig& c) {
    std::ostringstream os;
    const auto num = [](double v) { return format_double(v); };
    os << "model.N = " << c.model.N << '\n'
       << "model.n = " << c.model.n << '\n'
       << "model.d = " << c.model.d << '\n'
       << "model.h = " << num(c.model.h) << '\n'
       << "model.dense_limit = " << c.model.dense_limit << '\n';

    const auto& dis = c.disorder;
    os << "disorder.kind = " << to_string(dis.kind) << '\n';
    switch (dis.kind) {
    case DisorderKind::Bernoulli:
        os << "disorder.low = " << num(dis.values.at(0)) << '\n'
           << "disorder.high = " << num(dis.values.at(1)) << '\n'
           << "disorder.q = " << num(dis.probabilities.at(1)) << '\n';
        break;
    case DisorderKind::FiniteDiscrete:
        os << "disorder.values = " << join(dis.values) << '\n'
           << "disorder.probabilities = " << join(dis.probabilities) << '\n';
        break;
    case DisorderKind::Uniform:
        os << "disorder.low = " << num(dis.values.at(0)) << '\n'
           << "disorder.high = " << num(dis.values.at(1)) << '\n';
        break;
    }
    os << "disorder.amplitude = " << num(dis.amplitude) << '\n';

    os << "interaction.kind = " << to_string(c.interaction.kind) << '\n'
       << "interaction.C = " << num(c.interaction.C) << '\n'
       << "interaction.c = " << num(c.interaction.c) << '\n'
       << "interaction.tau = " << num(c.interaction.tau) << '\n';
    if (c.interaction.kind == InteractionKind::FiniteRange)
        os << "interaction.range = " << c.interaction.range << '\n';

    if (c.task.kind)
        os << "task.kind = " << to_string(*c.task.kind) << '\n';
    os << "task.m = " << num(c.task.m) << '\n'
       << "task.p = " << num(c.task.p) << '\n'
       << "task.E_lo = " << num(c.task.E_lo) << '\n'
       << "task.E_hi = " << num(c.task.E_hi) << '\n'
       << "task.grid_step = " << num(c.task.grid_step) << '\n'
       << "task.L_values = " << join(c.task.L_values) << '\n'
       << "task.L0 = " << c.task.L0 << '\n'
       << "task.scale_count = " << c.task.scale_count << '\n'
       << "task.alpha = " << num(c.task.alpha) << '\n'
       << "task.mode = " << to_string(c.task.mode) << '\n'
       << "task.L = " << c.task.L << '\n'
       << "task.s = " << num(c.task.s) << '\n'
       << "task.K_radius = " << c.task.K_radius << '\n'
       << "task.vertex_limit = " << c.task.vertex_limit << '\n';

    os << "run.master_seed = " << c.run.master_seed << '\n'
       << "run.realizations = " << c.run.realizations << '\n'
       << "run.workers = " << c.run.workers << '\n'
       << "run.output = " << c.run.output << '\n';
    return os.str();
}

void validate_config(const ExperimentConfig& c, TaskKind task) {
    std::vector<ConfigDiagnostic> problems;
    const auto require = [&problems](bool ok, const char* key, std::string message) {
        if (!ok)
            problems.push_back({0, key, std::move(message)});
    };
    require(!c.task.kind || *c.task.kind == task, "task.kind",
            std::string("config is for task '") + (c.task.kind ? to_string(*c.task.kind) : "") +
                "', not '" + to_string(task) + "'");

    if (task == TaskKind::Msa) {
        std::vector<int> scales;
        try {
            scales = c.msa_scales();
        } catch (const std::exception& e) {
            require(false, "task.L0", e.what());
        }
        require(!scales.empty(), "task.L_values", "msa needs task.L_values or task.L0 with task.scale_count");
        if (c.task.mode == MsaMode::ExactBernoulli)
            require(c.disorder.kind == DisorderKind::Bernoulli, "task.mode",
                    "exact_bernoulli requires disorder.kind = bernoulli");
        for (int L : scales) {
            const auto cube_sites = Cube(ConfigPoint::origin(c.model.n, c.model.d), L).cardinality();
            require(cube_sites <= c.model.dense_limit, "model.dense_limit",
                    "cube of radius " + std::to_string(L) + " has " + std::to_string(cube_sites) +
                        " sites, above the dense limit");
        }
    } else {
        const auto cube_sites = Cube(ConfigPoint::origin(c.model.n, c.model.d), c.task.L).cardinality();
        require(cube_sites <= c.model.dense_limit, "model.dense_limit",
                "cube of radius " + std::to_string(c.task.L) + " has " + std::to_string(cube_sites) +
                    " sites, above the dense limit");
        if (task == TaskKind::Decay)
            require(c.task.L >= 1, "task.L", "decay fits need L >= 1");
    }
    if (!problems.empty())
        throw ConfigError(std::move(problems));
}

}  // namespace anderson
