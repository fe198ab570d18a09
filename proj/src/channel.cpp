#include "dualband/channel.hpp"

#include <cmath>

#include "dualband/errors.hpp"
#include "dualband/math.hpp"

namespace dualband {

void BandConfig::validate(const std::string& prefix) const {
    if (!(carrier_hz > 0.0)) throw ConfigError(prefix + ".carrier_hz must be > 0");
    if (!(bandwidth_hz > 0.0)) throw ConfigError(prefix + ".bandwidth_hz must be > 0");
    if (nlos_extra_loss_db < 0.0)
        throw ConfigError(prefix + ".nlos_extra_loss_db must be >= 0");
}

BandConfig mmwave_default() {
    return BandConfig{"mmwave", 28e9, 5e9, 40.0, -10.0, 30.0, 45.0};
}

BandConfig sub6_default() {
    return BandConfig{"sub6", 2.5e9, 500e6, 40.0, -10.0, 5.0, 20.0};
}

double fspl_db(double distance_m, double carrier_hz) {
    if (!(distance_m > 0.0)) throw ConfigError("fspl: distance_m must be > 0");
    if (!(carrier_hz > 0.0)) throw ConfigError("fspl: carrier_hz must be > 0");
    return 20.0 * std::log10(distance_m) + 20.0 * std::log10(carrier_hz) +
           20.0 * std::log10(4.0 * kPi / kSpeedOfLight);
}

ChannelState channel_state(const BandConfig& band, int blocked, double distance_m) {
    band.validate("band");
    ChannelState st;
    st.band = &band;
    st.blocked = blocked ? 1 : 0;
    st.h_mode = blocked ? LinkMode::NLOS : LinkMode::LOS;
    st.snr_db = band.tx_power_dbm + band.antenna_gain_db -
                fspl_db(distance_m, band.carrier_hz) -
                (blocked ? band.nlos_extra_loss_db : 0.0) - band.noise_power_dbm;
    return st;
}

double shannon_capacity_bps(const BandConfig& band, double snr_db) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    return band.bandwidth_hz * std::log2(1.0 + snr);
}

double qpsk_ber(double snr_db) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    return 0.5 * erfc_series(std::sqrt(snr / 2.0));
}

}  // namespace dualband
