// hyperterm: evaluate interpolated terms of rising-factorial progressions
// a, a(a+b), a(a+b)(a+2b), ... at arbitrary real indices.
//
// Subcommands:
//   eval      one term by a chosen route (product, integral, oracle)
//   table     a fractional-index column obtained from one base evaluation
//   converge  product-route effort and achieved error across alphas and tols
//   compare   all applicable routes side by side with their spread
//
// stdout carries data (text, CSV, or JSON); diagnostics go to stderr.
// Exit codes: 0 success, 1 evaluation error, 2 divergent input, 64 usage.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <hyperterm/hyperterm.hpp>

namespace {

using nlohmann::ordered_json;
using namespace hyperterm;

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_divergent = 2;
constexpr int exit_usage = 64;

struct output_spec {
    std::string format = "text"; // text | csv | json
    int precision = 15;
};

// Accepts plain decimals or exact fractions "p/q" (preferred for thirds).
double parse_real(const std::string& s) {
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(s, &used);
            if (used != s.size())
                throw std::invalid_argument(s);
            return v;
        }
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        const double p = std::stod(num, &used);
        if (used != num.size())
            throw std::invalid_argument(s);
        const double q = std::stod(den, &used);
        if (used != den.size() || q == 0.0)
            throw std::invalid_argument(s);
        return p / q;
    } catch (const std::exception&) {
        throw CLI::ValidationError("expected a number or a fraction p/q, got '" +
                                   s + "'");
    }
}

alpha_strategy parse_alpha(const std::string& s) {
    if (s == "a")
        return alpha_strategy::default_a();
    if (s == "accel")
        return alpha_strategy::accelerated();
    return alpha_strategy::custom(parse_real(s));
}

// Rounds to `digits` significant decimal digits; emitted numbers are the
// rounded doubles themselves, so JSON re-parsing reproduces them bit-exactly.
double round_sig(double v, int digits) {
    if (!std::isfinite(v))
        return v;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
    return std::strtod(buf, nullptr);
}

std::string format_number(double v, int digits) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// One flat record: ordered keys with double / integer / string / null values.
using field_value =
    std::variant<double, std::int64_t, std::string, bool, std::nullptr_t>;
struct field {
    std::string key;
    field_value value;
};
using record = std::vector<field>;

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string field_text(const field& f, const output_spec& out) {
    if (std::holds_alternative<double>(f.value))
        return format_number(std::get<double>(f.value), out.precision);
    if (std::holds_alternative<std::int64_t>(f.value))
        return std::to_string(std::get<std::int64_t>(f.value));
    if (std::holds_alternative<std::string>(f.value))
        return std::get<std::string>(f.value);
    if (std::holds_alternative<bool>(f.value))
        return std::get<bool>(f.value) ? "true" : "false";
    return "";
}

ordered_json record_json(const record& rec, const output_spec& out) {
    ordered_json j;
    for (const auto& f : rec) {
        if (std::holds_alternative<double>(f.value)) {
            const double v = std::get<double>(f.value);
            if (std::isfinite(v))
                j[f.key] = round_sig(v, out.precision);
            else
                j[f.key] = nullptr; // JSON has no inf/nan
        } else if (std::holds_alternative<std::int64_t>(f.value)) {
            j[f.key] = std::get<std::int64_t>(f.value);
        } else if (std::holds_alternative<std::string>(f.value)) {
            j[f.key] = std::get<std::string>(f.value);
        } else if (std::holds_alternative<bool>(f.value)) {
            j[f.key] = std::get<bool>(f.value);
        } else {
            j[f.key] = nullptr;
        }
    }
    return j;
}

void emit_records(const std::vector<record>& rows, const output_spec& out,
                  bool as_array) {
    if (out.format == "json") {
        if (as_array) {
            ordered_json arr = ordered_json::array();
            for (const auto& r : rows)
                arr.push_back(record_json(r, out));
            std::cout << arr.dump(2) << '\n';
        } else {
            std::cout << record_json(rows.front(), out).dump(2) << '\n';
        }
        return;
    }
    if (out.format == "csv") {
        if (rows.empty())
            return;
        std::string header;
        for (const auto& f : rows.front()) {
            if (!header.empty())
                header += ',';
            header += csv_escape(f.key);
        }
        std::cout << header << "\r\n";
        for (const auto& r : rows) {
            std::string line;
            for (const auto& f : r) {
                if (!line.empty())
                    line += ',';
                line += csv_escape(field_text(f, out));
            }
            std::cout << line << "\r\n";
        }
        return;
    }
    // text
    if (!as_array) {
        for (const auto& f : rows.front())
            std::cout << f.key << " = " << field_text(f, out) << '\n';
        return;
    }
    for (const auto& r : rows) {
        std::string line;
        for (const auto& f : r) {
            if (!line.empty())
                line += "  ";
            line += f.key + "=" + field_text(f, out);
        }
        std::cout << line << '\n';
    }
}

// Reduces an index to frac + m with frac in {1/2, 1/3} (integer m, either
// sign); empty when the integral route does not apply.
struct index_reduction {
    double frac;
    long long steps;
};

std::optional<index_reduction> reduce_index(double n) {
    const double f = n - std::floor(n);
    if (std::abs(f - 0.5) < 1e-9)
        return index_reduction{0.5, std::llround(n - 0.5)};
    if (std::abs(f - 1.0 / 3.0) < 1e-9)
        return index_reduction{1.0 / 3.0, std::llround(n - 1.0 / 3.0)};
    return std::nullopt;
}

double apply_steps(series_params p, double frac, long long m, double base) {
    if (m >= 0)
        return shift(p, frac, m, base);
    double v = base;
    for (long long j = -1; j >= m; --j)
        v /= p.a + (frac + static_cast<double>(j)) * p.b;
    return v;
}

eval_result integral_route(series_params p, double n, quadrature_spec quad) {
    const auto red = reduce_index(n);
    if (!red)
        throw param_error(
            "integral route serves only indices with fractional part 1/2 or 1/3");
    const eval_result base = red->frac == 0.5 ? eval_half(p, quad)
                                              : eval_third(p, quad);
    eval_result r = base;
    r.value = apply_steps(p, red->frac, red->steps, base.value);
    return r;
}

record eval_record(double a, double b, double n, const std::string& method,
                   const eval_result& r) {
    return {{"a", a},
            {"b", b},
            {"n", n},
            {"method", method},
            {"value", r.divergent ? field_value(nullptr) : field_value(r.value)},
            {"error_estimate", r.error_estimate},
            {"effort", r.effort},
            {"divergent", r.divergent}};
}

int cmd_eval(double a, double b, double n, std::string method, double tol,
             const std::string& alpha, const output_spec& out) {
    const series_params params{a, b};
    const validation v = validate(params, n);
    if (is_divergent(v)) {
        const eval_result r = eval_result::divergent_result(
            method == "oracle" ? eval_method::oracle
            : method == "integral" ? eval_method::integral
                                   : eval_method::product);
        const std::string shown = method == "auto" ? "product" : method;
        emit_records({eval_record(a, b, n, shown, r)}, out, false);
        return exit_divergent;
    }
    const eval_problem problem = std::get<eval_problem>(v);
    eval_result r;
    std::string shown = method;
    if (method == "auto") {
        shown = "product";
        method = "product";
    }
    if (method == "product")
        r = eval_product(problem, parse_alpha(alpha),
                         truncation_spec::adaptive(tol));
    else if (method == "oracle")
        r = oracle_eval(params, n);
    else
        r = integral_route(params, n, quadrature_spec{});
    emit_records({eval_record(a, b, n, shown, r)}, out, false);
    return exit_ok;
}

int cmd_table(double a, double b, double frac, long long count,
              const output_spec& out) {
    const series_params params{a, b};
    if (!(frac > 0.0) || !(frac < 1.0))
        throw param_error("--frac must lie strictly between 0 and 1");
    if (count < 1)
        throw param_error("--count must be >= 1");
    const eval_problem problem = std::get<eval_problem>(validate(params, frac));
    const eval_result base = eval_product(problem, alpha_strategy::default_a(),
                                          truncation_spec::adaptive(1e-10));
    std::vector<record> rows;
    for (long long j = 0; j < count; ++j) {
        const double index = frac + static_cast<double>(j);
        const double value = shift(params, frac, j, base.value);
        rows.push_back({{"index", index}, {"value", value}});
    }
    emit_records(rows, out, true);
    return exit_ok;
}

int cmd_converge(double a, double b, double n,
                 const std::vector<std::string>& alphas,
                 const std::vector<std::string>& tols, const output_spec& out) {
    const series_params params{a, b};
    const validation v = validate(params, n);
    if (is_divergent(v)) {
        std::cerr << "hyperterm: term at n = " << n << " is divergent\n";
        return exit_divergent;
    }
    const eval_problem problem = std::get<eval_problem>(v);
    const double oracle = gamma_oracle(params, n);
    std::vector<record> rows;
    for (const auto& alpha_text : alphas) {
        const alpha_strategy strategy = parse_alpha(alpha_text);
        const double resolved = resolve_alpha(strategy, params, n);
        for (const auto& tol_text : tols) {
            const double tol = parse_real(tol_text);
            const eval_result r =
                eval_product(problem, strategy, truncation_spec::adaptive(tol));
            const double rel = std::abs(r.value - oracle) / std::abs(oracle);
            rows.push_back({{"alpha", resolved},
                            {"tol", tol},
                            {"terms", r.effort},
                            {"abs_rel_error_vs_oracle", rel}});
        }
    }
    emit_records(rows, out, true);
    return exit_ok;
}

int cmd_compare(double a, double b, double n, const output_spec& out) {
    const series_params params{a, b};
    const validation v = validate(params, n);
    if (is_divergent(v)) {
        emit_records({{{"a", a},
                       {"b", b},
                       {"n", n},
                       {"product", nullptr},
                       {"integral", nullptr},
                       {"oracle", nullptr},
                       {"max_rel_diff", nullptr},
                       {"divergent", true}}},
                     out, false);
        return exit_divergent;
    }
    const eval_problem problem = std::get<eval_problem>(v);
    std::vector<double> values;
    record rec{{"a", a}, {"b", b}, {"n", n}};

    const eval_result product = eval_product(problem, alpha_strategy::default_a(),
                                             truncation_spec::adaptive(1e-10));
    rec.push_back({"product", product.value});
    values.push_back(product.value);

    bool integral_ok = false;
    double integral_value = 0.0;
    if (const auto red = reduce_index(n)) {
        if (red->frac == 0.5 || params.a > params.b / 3.0) {
            integral_value = integral_route(params, n, quadrature_spec{}).value;
            integral_ok = true;
        }
    }
    if (integral_ok) {
        rec.push_back({"integral", integral_value});
        values.push_back(integral_value);
    } else {
        rec.push_back({"integral", nullptr});
    }

    const double oracle = gamma_oracle(params, n);
    rec.push_back({"oracle", oracle});
    values.push_back(oracle);

    double max_rel = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            max_rel = std::max(max_rel,
                               std::abs(values[i] - values[j]) /
                                   std::max(std::abs(values[i]),
                                            std::abs(values[j])));
    rec.push_back({"max_rel_diff", max_rel});
    rec.push_back({"divergent", false});
    emit_records({rec}, out, false);
    return max_rel < 1e-7 ? exit_ok : exit_error;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"interpolated terms of rising-factorial progressions"};
    app.require_subcommand(1);

    std::string a_text = "1", b_text = "1", n_text = "0";
    std::string method = "auto", alpha = "a", frac_text = "1/2";
    std::string tol_text = "1e-10";
    long long count = 5;
    std::vector<std::string> alphas{"a", "accel"};
    std::vector<std::string> tols{"1e-6", "1e-8", "1e-10"};
    output_spec out;

    const auto add_common = [&](CLI::App* cmd, bool with_n) {
        cmd->add_option("--a", a_text, "first term a (> 0)")->required();
        cmd->add_option("--b", b_text, "common difference b (> 0)")->required();
        if (with_n)
            cmd->add_option("--n", n_text, "index n (decimal or p/q)")->required();
        cmd->add_option("--format", out.format, "text, csv, or json")
            ->check(CLI::IsMember({"text", "csv", "json"}));
        cmd->add_option("--precision", out.precision, "significant digits")
            ->check(CLI::Range(4, 17));
    };

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate one term");
    add_common(eval_cmd, true);
    eval_cmd->add_option("--method", method, "product, integral, oracle, auto")
        ->check(CLI::IsMember({"product", "integral", "oracle", "auto"}));
    eval_cmd->add_option("--tol", tol_text, "relative tolerance (product route)");
    eval_cmd->add_option("--alpha", alpha, "a, accel, or a number > 0");

    CLI::App* table_cmd =
        app.add_subcommand("table", "term column frac, frac+1, ...");
    add_common(table_cmd, false);
    table_cmd->add_option("--frac", frac_text, "base index in (0,1), e.g. 1/2")
        ->required();
    table_cmd->add_option("--count", count, "number of rows");

    CLI::App* converge_cmd =
        app.add_subcommand("converge", "effort vs alpha and tolerance");
    add_common(converge_cmd, true);
    converge_cmd->add_option("--alpha", alphas, "alpha choices (repeatable)");
    converge_cmd->add_option("--tol", tols, "tolerances (repeatable)");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "all applicable routes side by side");
    add_common(compare_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message
        return exit_usage;
    }

    try {
        const double a = parse_real(a_text);
        const double b = parse_real(b_text);
        if (eval_cmd->parsed())
            return cmd_eval(a, b, parse_real(n_text), method,
                            parse_real(tol_text), alpha, out);
        if (table_cmd->parsed())
            return cmd_table(a, b, parse_real(frac_text), count, out);
        if (converge_cmd->parsed())
            return cmd_converge(a, b, parse_real(n_text), alphas, tols, out);
        if (compare_cmd->parsed())
            return cmd_compare(a, b, parse_real(n_text), out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "hyperterm: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "hyperterm: " << e.what() << '\n';
        return exit_error;
    }
    return exit_usage;
}
