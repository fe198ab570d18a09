#pragma once

#include <string>

namespace dualband {

// One radio band of the dual-band transmitter.
struct BandConfig {
    std::string name;
    double carrier_hz = 0.0;
    double bandwidth_hz = 0.0;
    double tx_power_dbm = 0.0;
    double noise_power_dbm = 0.0;
    double nlos_extra_loss_db = 0.0;  // attenuation added while blocked
    double antenna_gain_db = 0.0;     // combined Tx+Rx

    void validate(const std::string& prefix) const;
};

// 28 GHz / 5 GHz BW / 40 dBm / -10 dBm noise / 30 dB blockage loss / 45 dB gain.
BandConfig mmwave_default();
// 2.5 GHz / 500 MHz BW / 40 dBm / -10 dBm noise / 5 dB blockage loss / 20 dB gain.
BandConfig sub6_default();

enum class LinkMode { LOS, NLOS };

struct ChannelState {
    const BandConfig* band = nullptr;
    int blocked = 0;
    double snr_db = 0.0;
    LinkMode h_mode = LinkMode::LOS;
};

// Free-space path loss: 20 log10(d) + 20 log10(f) + 20 log10(4 pi / c), in dB.
double fspl_db(double distance_m, double carrier_hz);

// SNR budget: tx + gain - fspl - (blocked ? nlos loss : 0) - noise.
ChannelState channel_state(const BandConfig& band, int blocked, double distance_m);

// Shannon capacity BW * log2(1 + snr_linear), bits/second.
double shannon_capacity_bps(const BandConfig& band, double snr_db);

// QPSK bit error rate 0.5 * erfc(sqrt(snr_linear / 2)).
double qpsk_ber(double snr_db);

}  // namespace dualband
