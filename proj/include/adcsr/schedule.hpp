#pragma once

#include <cmath>
#include <string>

#include "adcsr/error.hpp"

namespace adcsr {

enum class TrainMode { direct, pretrain_skip_then_joint, pretrain_skip_then_freeze };

const char* to_string(TrainMode m);
TrainMode train_mode_from_string(const std::string& s);

struct TrainConfig {
    TrainMode mode = TrainMode::direct;
    double lr0 = 1e-4;
    long lr_halve_every = 100000;  // step-based halving interval (config, not a paper fact)
    double lr_stop = 5e-7;
    int batch = 16;
    long max_steps = 1000000;
    uint64_t seed = 0;
    long pretrain_steps = -1;  // -1: one halving interval
    int patch = 48;
    long log_every = 50;
    long checkpoint_every = 1000;

    long effective_pretrain_steps() const {
        return pretrain_steps < 0 ? lr_halve_every : pretrain_steps;
    }

    void validate() const {
        if (!(lr0 > lr_stop && lr_stop > 0.0))
            throw ConfigError("train: need lr0 > lr_stop > 0");
        if (batch < 1) throw ConfigError("train.batch must be >= 1");
        if (lr_halve_every < 1) throw ConfigError("train.lr_halve_every must be >= 1");
        if (max_steps < 0) throw ConfigError("train.max_steps must be >= 0");
        if (patch < 1) throw ConfigError("train.patch must be >= 1");
        if (log_every < 1 || checkpoint_every < 1)
            throw ConfigError("train.log_every/checkpoint_every must be >= 1");
    }
};

// lr0 * 2^-floor(step / halve_every); training stops once this drops below
// lr_stop.
inline double lr_schedule(long step, const TrainConfig& cfg) {
    return cfg.lr0 * std::pow(2.0, -static_cast<double>(step / cfg.lr_halve_every));
}

inline bool schedule_finished(long step, const TrainConfig& cfg) {
    return lr_schedule(step, cfg) < cfg.lr_stop;
}

}  // namespace adcsr
