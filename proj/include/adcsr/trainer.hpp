#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adcsr/checkpoint.hpp"
#include "adcsr/dataset.hpp"
#include "adcsr/optimizer.hpp"
#include "adcsr/schedule.hpp"

namespace adcsr {

struct TrainResult {
    long pretrain_steps_run = 0;
    long main_steps_run = 0;
    double final_loss = 0.0;
    std::vector<double> pretrain_losses;
    std::vector<double> main_losses;
    std::string final_checkpoint;
};

// L1 training over sampled patches with the halving schedule and the three
// SKIP-pretraining modes. Deterministic for a fixed (seed, corpus, config);
// checkpoints carry parameters, optimizer moments, RNG state and phase so a
// resumed run reproduces the unbroken one bitwise.
class Trainer {
public:
    Trainer(AdcsrModel<float>& model, PatchSampler& sampler, const TrainConfig& cfg,
            std::string out_dir, std::vector<EvalItem> val_items = {});

    // Load a checkpoint produced by this trainer and continue from it.
    void resume_from(const std::string& path);

    TrainResult run();

    // Observer for tests; called on every logged record.
    std::function<void(const std::string& phase, long step, double lr, double loss)> on_log;

private:
    enum class Phase { pretrain, main };

    std::vector<Parameter<float>*> phase_params(Phase phase) const;
    double train_step(Phase phase, AdamOptimizer<float>& opt, double lr);
    void save_state(const std::string& path, Phase phase, long next_step,
                    AdamOptimizer<float>* opt);
    void log_record(const std::string& phase, long step, double lr, double loss);
    double val_psnr();

    AdcsrModel<float>& model_;
    PatchSampler& sampler_;
    TrainConfig cfg_;
    std::string out_dir_;
    std::vector<EvalItem> val_items_;

    // resume state
    bool resumed_ = false;
    Phase resume_phase_ = Phase::pretrain;
    long resume_step_ = 0;
    long resume_opt_t_ = 0;
    std::optional<Checkpoint> resume_ckpt_;
};

}  // namespace adcsr
