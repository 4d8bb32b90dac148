#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace hetnet
{

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

//---------------------------------------------------------------------------//
/*!
 * Radio and geometry parameters of the two-tier network, SI-linear units.
 *
 * Defaults reproduce the baseline deployment: 5 Mcells, 50 Scells and
 * 200 UEs per km^2; 2 GHz / 20 MHz macro layer; 70 GHz / 1 GHz mmWave layer.
 * UEs are omnidirectional, so there is no UE gain.
 */
struct SystemParams
{
    double lambda_m = 5e-6;  //!< Mcell density [1/m^2]
    double lambda_s = 5e-5;  //!< Scell density [1/m^2]
    double lambda_u = 2e-4;  //!< UE density [1/m^2]

    double p_m = 39.810717055349734;   //!< Mcell power [W] (46 dBm)
    double p_s = 1.0;                  //!< Scell power [W] (30 dBm)
    double p_um = 0.19952623149688797;  //!< UE power towards Mcell [W] (23 dBm)
    double p_us = 0.19952623149688797;  //!< UE power towards Scell [W] (23 dBm)

    double f_m = 2e9;   //!< [Hz]
    double f_s = 70e9;  //!< [Hz]
    double w_m = 20e6;  //!< [Hz]
    double w_s = 1e9;   //!< [Hz]

    double t_m = 1.0;     //!< DL Mcell bias
    double t_s = 1.0;     //!< DL Scell bias
    double t_m_ul = 1.0;  //!< UL Mcell bias
    double t_s_ul = 1.0;  //!< UL Scell bias

    double alpha_m = 3.0;
    double alpha_l = 2.0;
    double alpha_n = 4.0;

    double g_s_max = 63.09573444801933;    //!< 18 dBi
    double g_s_min = 0.6309573444801932;   //!< -2 dBi
    double g_m = 1.0;                      //!< 0 dBi
    double theta_s = 10.0 * kPi / 180.0;  //!< main-lobe width [rad]

    double omega = 0.11;  //!< LOS probability inside the LOS ball
    double mu = 200.0;    //!< LOS ball radius [m]

    double noise_figure = 10.0;  //!< linear (10 dB)
    double epsilon = 0.0;        //!< UL fractional pathloss compensation

    //! When set, UL biases follow DL biased received power:
    //! T'_s = P_s T_s / P_us and T'_m = P_m T_m / P_um.
    bool ul_bias_from_dl = false;

    //! Throws ConfigError naming the first violated field.
    void validate() const;
};

struct DerivedConstants
{
    double beta_m;    //!< near-field pathloss at 1 m, (wavelength / 4 pi)^2
    double beta_s;
    double sigma2_m;  //!< noise power [W]
    double sigma2_s;
    double psi_m;     //!< gain * beta
    double psi_s;     //!< uses the main-lobe gain
    double a_dl;      //!< P_s T_s psi_s / (P_m T_m psi_m)
    double a_ul;      //!< P_us T'_s psi_s / (P_um T'_m psi_m)
    double t_m_ul;    //!< effective UL biases (after ul_bias_from_dl)
    double t_s_ul;
};

DerivedConstants derive(const SystemParams& params);

//! Noise power in W for bandwidth w [Hz] and linear noise figure.
double noise_power(double bandwidth, double noise_figure);

class ConfigError : public std::invalid_argument
{
  public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field))
    {
    }

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

  private:
    std::string field_;
};

struct LoadedConfig
{
    SystemParams params;
    std::vector<std::string> warnings;
};

/*!
 * Build parameters from a JSON object.
 *
 * Keys are case-insensitive field names. Values are plain numbers in the
 * field's default unit, strings such as "30 dBm" or "2 GHz", or objects
 * {"value": x, "unit": "W"}. Missing keys keep their defaults; unknown keys
 * produce warnings.
 */
LoadedConfig load_config(const nlohmann::json& doc);
LoadedConfig load_config_file(const std::filesystem::path& path);

//! Apply one key/value (same syntax as load_config) on top of existing params.
void apply_setting(SystemParams& params, const std::string& key, const nlohmann::json& value);

//! Lossless SI-linear serialization accepted by load_config.
nlohmann::json emit_config(const SystemParams& params);

//! Field names and their default units, for documentation and the CLI.
std::vector<std::pair<std::string, std::string>> config_fields();

}  // namespace hetnet
