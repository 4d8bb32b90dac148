#include "hetnet/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace hetnet
{

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watt_to_dbm(double watt)
{
    return 10.0 * std::log10(watt) + 30.0;
}

double noise_power(double bandwidth, double noise_figure)
{
    // -174 dBm/Hz thermal floor integrated over the band, plus the noise figure.
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth) + linear_to_db(noise_figure);
    return dbm_to_watt(dbm);
}

namespace
{

enum class Kind
{
    Density,
    Power,
    Frequency,
    Ratio,  // bias, gain and noise figure: dB by default
    Angle,
    Length,
    Plain,
};

struct Field
{
    const char* name;
    Kind kind;
    double SystemParams::*member;
};

constexpr Field kFields[] = {
    {"lambda_m", Kind::Density, &SystemParams::lambda_m},
    {"lambda_s", Kind::Density, &SystemParams::lambda_s},
    {"lambda_u", Kind::Density, &SystemParams::lambda_u},
    {"p_m", Kind::Power, &SystemParams::p_m},
    {"p_s", Kind::Power, &SystemParams::p_s},
    {"p_um", Kind::Power, &SystemParams::p_um},
    {"p_us", Kind::Power, &SystemParams::p_us},
    {"f_m", Kind::Frequency, &SystemParams::f_m},
    {"f_s", Kind::Frequency, &SystemParams::f_s},
    {"w_m", Kind::Frequency, &SystemParams::w_m},
    {"w_s", Kind::Frequency, &SystemParams::w_s},
    {"t_m", Kind::Ratio, &SystemParams::t_m},
    {"t_s", Kind::Ratio, &SystemParams::t_s},
    {"t_m_ul", Kind::Ratio, &SystemParams::t_m_ul},
    {"t_s_ul", Kind::Ratio, &SystemParams::t_s_ul},
    {"alpha_m", Kind::Plain, &SystemParams::alpha_m},
    {"alpha_l", Kind::Plain, &SystemParams::alpha_l},
    {"alpha_n", Kind::Plain, &SystemParams::alpha_n},
    {"g_s_max", Kind::Ratio, &SystemParams::g_s_max},
    {"g_s_min", Kind::Ratio, &SystemParams::g_s_min},
    {"g_m", Kind::Ratio, &SystemParams::g_m},
    {"theta_s", Kind::Angle, &SystemParams::theta_s},
    {"omega", Kind::Plain, &SystemParams::omega},
    {"mu", Kind::Length, &SystemParams::mu},
    {"noise_figure", Kind::Ratio, &SystemParams::noise_figure},
    {"epsilon", Kind::Plain, &SystemParams::epsilon},
};

const char* default_unit(Kind kind)
{
    switch (kind)
    {
        case Kind::Density: return "/km2";
        case Kind::Power: return "dBm";
        case Kind::Frequency: return "Hz";
        case Kind::Ratio: return "dB";
        case Kind::Angle: return "deg";
        case Kind::Length: return "m";
        case Kind::Plain: return "";
    }
    return "";
}

const char* si_unit(Kind kind)
{
    switch (kind)
    {
        case Kind::Density: return "/m2";
        case Kind::Power: return "W";
        case Kind::Frequency: return "Hz";
        case Kind::Ratio: return "lin";
        case Kind::Angle: return "rad";
        case Kind::Length: return "m";
        case Kind::Plain: return "";
    }
    return "";
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::optional<double> convert(Kind kind, double v, const std::string& unit_raw)
{
    const std::string unit = lower(unit_raw);
    switch (kind)
    {
        case Kind::Density:
            if (unit == "/km2" || unit == "/km^2" || unit == "per_km2") return v * 1e-6;
            if (unit == "/m2" || unit == "/m^2" || unit == "per_m2") return v;
            break;
        case Kind::Power:
            if (unit == "dbm") return dbm_to_watt(v);
            if (unit == "dbw") return db_to_linear(v);
            if (unit == "w") return v;
            if (unit == "mw") return v * 1e-3;
            break;
        case Kind::Frequency:
            if (unit == "hz") return v;
            if (unit == "khz") return v * 1e3;
            if (unit == "mhz") return v * 1e6;
            if (unit == "ghz") return v * 1e9;
            break;
        case Kind::Ratio:
            if (unit == "db" || unit == "dbi") return db_to_linear(v);
            if (unit == "lin" || unit == "linear") return v;
            break;
        case Kind::Angle:
            if (unit == "deg") return v * kPi / 180.0;
            if (unit == "rad") return v;
            break;
        case Kind::Length:
            if (unit == "m") return v;
            if (unit == "km") return v * 1e3;
            break;
        case Kind::Plain:
            if (unit.empty() || unit == "lin") return v;
            break;
    }
    return std::nullopt;
}

double parse_value(const Field& field, const nlohmann::json& value)
{
    double number = 0.0;
    std::string unit = default_unit(field.kind);
    if (value.is_number())
    {
        number = value.get<double>();
    }
    else if (value.is_string())
    {
        std::istringstream in(value.get<std::string>());
        if (!(in >> number))
        {
            throw ConfigError(field.name, "cannot parse '" + value.get<std::string>() + "'");
        }
        std::string rest;
        if (in >> rest)
        {
            unit = rest;
        }
    }
    else if (value.is_object() && value.contains("value"))
    {
        if (!value.at("value").is_number())
        {
            throw ConfigError(field.name, "'value' must be a number");
        }
        number = value.at("value").get<double>();
        if (value.contains("unit"))
        {
            unit = value.at("unit").get<std::string>();
        }
    }
    else
    {
        throw ConfigError(field.name, "expected a number, a string with unit, or {value, unit}");
    }

    const auto converted = convert(field.kind, number, unit);
    if (!converted)
    {
        throw ConfigError(field.name, "unsupported unit '" + unit + "'");
    }
    return *converted;
}

const Field* find_field(const std::string& key)
{
    const std::string k = lower(key);
    for (const Field& f : kFields)
    {
        if (k == f.name)
        {
            return &f;
        }
    }
    return nullptr;
}

}  // namespace

void SystemParams::validate() const
{
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok)
        {
            throw ConfigError(field, what);
        }
    };
    require(lambda_m > 0.0, "lambda_m", "must be > 0");
    require(lambda_s >= 0.0, "lambda_s", "must be >= 0");
    require(lambda_u >= 0.0, "lambda_u", "must be >= 0");
    require(p_m > 0.0, "p_m", "must be > 0");
    require(p_s > 0.0, "p_s", "must be > 0");
    require(p_um > 0.0, "p_um", "must be > 0");
    require(p_us > 0.0, "p_us", "must be > 0");
    require(f_m > 0.0, "f_m", "must be > 0");
    require(f_s > 0.0, "f_s", "must be > 0");
    require(w_m > 0.0, "w_m", "must be > 0");
    require(w_s > 0.0, "w_s", "must be > 0");
    require(t_m > 0.0, "t_m", "must be > 0");
    require(t_s > 0.0, "t_s", "must be > 0");
    require(t_m_ul > 0.0, "t_m_ul", "must be > 0");
    require(t_s_ul > 0.0, "t_s_ul", "must be > 0");
    require(alpha_m > 2.0, "alpha_m", "must be > 2");
    require(alpha_n > 2.0, "alpha_n", "must be > 2");
    require(alpha_l > 0.0, "alpha_l", "must be > 0");
    require(alpha_l <= alpha_n, "alpha_l", "must not exceed alpha_n");
    require(g_s_max > 0.0, "g_s_max", "must be > 0");
    require(g_s_min > 0.0, "g_s_min", "must be > 0");
    require(g_m > 0.0, "g_m", "must be > 0");
    require(theta_s > 0.0 && theta_s < 2.0 * kPi, "theta_s", "must lie in (0, 2 pi)");
    require(omega >= 0.0 && omega <= 1.0, "omega", "must lie in [0, 1]");
    require(mu > 0.0, "mu", "must be > 0");
    require(noise_figure > 0.0, "noise_figure", "must be > 0");
    require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon", "must lie in [0, 1]");
}

DerivedConstants derive(const SystemParams& params)
{
    DerivedConstants d{};
    const double wl_m = kSpeedOfLight / params.f_m / (4.0 * kPi);
    const double wl_s = kSpeedOfLight / params.f_s / (4.0 * kPi);
    d.beta_m = wl_m * wl_m;
    d.beta_s = wl_s * wl_s;
    d.sigma2_m = noise_power(params.w_m, params.noise_figure);
    d.sigma2_s = noise_power(params.w_s, params.noise_figure);
    d.psi_m = params.g_m * d.beta_m;
    d.psi_s = params.g_s_max * d.beta_s;
    if (params.ul_bias_from_dl)
    {
        d.t_s_ul = params.p_s * params.t_s / params.p_us;
        d.t_m_ul = params.p_m * params.t_m / params.p_um;
    }
    else
    {
        d.t_s_ul = params.t_s_ul;
        d.t_m_ul = params.t_m_ul;
    }
    d.a_dl = (params.p_s * params.t_s * d.psi_s) / (params.p_m * params.t_m * d.psi_m);
    d.a_ul = (params.p_us * d.t_s_ul * d.psi_s) / (params.p_um * d.t_m_ul * d.psi_m);
    return d;
}

void apply_setting(SystemParams& params, const std::string& key, const nlohmann::json& value)
{
    if (lower(key) == "ul_bias_from_dl")
    {
        if (!value.is_boolean())
        {
            throw ConfigError("ul_bias_from_dl", "expected a boolean");
        }
        params.ul_bias_from_dl = value.get<bool>();
        return;
    }
    const Field* field = find_field(key);
    if (field == nullptr)
    {
        throw ConfigError(key, "unknown parameter");
    }
    params.*(field->member) = parse_value(*field, value);
}

LoadedConfig load_config(const nlohmann::json& doc)
{
    if (!doc.is_object())
    {
        throw ConfigError("<root>", "configuration must be a JSON object");
    }
    LoadedConfig out;
    for (const auto& [key, value] : doc.items())
    {
        if (lower(key) != "ul_bias_from_dl" && find_field(key) == nullptr)
        {
            out.warnings.push_back("unknown key '" + key + "' ignored");
            continue;
        }
        apply_setting(out.params, key, value);
    }
    out.params.validate();
    return out;
}

LoadedConfig load_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("<file>", "cannot open " + path.string());
    }
    nlohmann::json doc;
    try
    {
        in >> doc;
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    return load_config(doc);
}

nlohmann::json emit_config(const SystemParams& params)
{
    nlohmann::json doc = nlohmann::json::object();
    for (const Field& f : kFields)
    {
        doc[f.name] = {{"value", params.*(f.member)}, {"unit", si_unit(f.kind)}};
    }
    doc["ul_bias_from_dl"] = params.ul_bias_from_dl;
    return doc;
}

std::vector<std::pair<std::string, std::string>> config_fields()
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const Field& f : kFields)
    {
        out.emplace_back(f.name, default_unit(f.kind));
    }
    out.emplace_back("ul_bias_from_dl", "bool");
    return out;
}

}  // namespace hetnet
