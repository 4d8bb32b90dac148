#pragma once

#include "params.hpp"
#include "pathloss.hpp"

namespace hetnet
{

enum class Direction
{
    DL,
    UL,
};

enum class Criterion
{
    MaxBRP,
    MaxRate,
};

enum class ResultSource
{
    Quadrature,
    ClosedForm,
    MonteCarlo,
};

const char* to_string(Direction direction);
const char* to_string(Criterion criterion);
const char* to_string(ResultSource source);

struct AssocResult
{
    double p_mcell = 0.0;
    double p_scell = 0.0;
    ResultSource source = ResultSource::Quadrature;
};

//! Association weight a: Scell wins when L_s < a L_m.
double association_weight(Direction direction, const DerivedConstants& derived);

//! UE or BS transmit power feeding the mmWave link in this direction.
double mmwave_tx_power(Direction direction, const SystemParams& params);
double sub6_tx_power(Direction direction, const SystemParams& params);

//! Max-BRP association: P(Mcell) = int Fbar_s(a l) f_m(l) dl.
AssocResult assoc_brp(Direction direction, const SystemParams& params);

/*!
 * Closed form of assoc_brp for alpha_l = 2, alpha_n = alpha_m = 4.
 *
 * Throws std::invalid_argument for other exponents.
 */
AssocResult assoc_brp_closed(Direction direction, const SystemParams& params);

//! CCDF of the mmWave SNR at the typical UE (Rayleigh fading, main-lobe gain).
double snr_ccdf_mmwave(Direction direction, double z, const SystemParams& params);

//! Density of the mmWave SNR: (sigma^2/P psi) int l exp(-z sigma^2 l / P psi) f_s(l) dl.
double snr_pdf_mmwave(Direction direction, double z, const SystemParams& params);

//! Max-Rate association with unit loads: P(Mcell) = int f_snr(z) / (1 + rho((1+z)^{W_s/W_m} - 1)) dz.
AssocResult assoc_rate(Direction direction, const SystemParams& params);

AssocResult assoc_analytic(Direction direction, Criterion criterion, const SystemParams& params);

}  // namespace hetnet
