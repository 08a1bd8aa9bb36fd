#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "eccprove/circuit.hpp"
#include "eccprove/codes.hpp"

namespace eccprove {

/// Combinational encoder: data_i[k] -> cw_o[n], systematic.
Circuit synth_encoder(const CodeSpec& spec);

/// Encoder for a parity-check matrix with one flipped entry: row 0 of the
/// row-reduced H at the first data position. Used as a wrong reference model.
Circuit synth_mutated_encoder(const CodeSpec& spec);

/// Combinational syndrome generator: cw_i[n] -> syn_o[r].
Circuit synth_syndrome(const CodeSpec& spec);

enum class DecoderMutation {
    None,
    /// One weight-t_correct table entry also drives the next-lower flag,
    /// so two flags rise together for that pattern.
    OneHotOverlap,
};

inline constexpr std::size_t kDecoderMaxN = 32;
inline constexpr std::size_t kDecoderMaxTable = std::size_t{1} << 16;

/// Syndrome-table decoder: cw_i[n] -> no_err, err_1..err_{t_detect}, data_o[k],
/// ecc_o[r] (corrected check bits), syn_o[r].
Circuit synth_decoder(const CodeSpec& spec, DecoderMutation mutation = DecoderMutation::None);

/// Names of the flag ports in one-hot order: no_err, err_1, ..., err_{t_detect}.
std::vector<std::string> decoder_flag_names(const CodeSpec& spec);

struct PipelineSchedule {
    std::size_t encode_cycles = 1;
    std::size_t detect_cycles = 1;
    std::size_t correct_cycles = 1;

    std::size_t total() const noexcept { return encode_cycles + detect_cycles + correct_cycles; }
    std::size_t decode() const noexcept { return detect_cycles + correct_cycles; }
};

/// Parses "E,D,C".
PipelineSchedule parse_schedule(const std::string& text);

/// Wraps a combinational circuit into a start/valid transaction with the given
/// latency: inputs rst_n_i, start_i plus c's inputs; outputs c's outputs (held
/// between transactions), valid_o, accept_o, state_o (bit 0 = IDLE).
/// start_i at cycle t is accepted when idle; outputs are valid at t + latency.
Circuit pipeline(const Circuit& c, std::size_t latency);
Circuit pipeline(const Circuit& c, const PipelineSchedule& sched);

/// Formal harness: encoder and decoder side by side with no connection
/// between cw_o and cw_i.
Circuit build_wrapper(const Circuit& enc, const Circuit& dec);

/// Sequential encoder/decoder core sharing one codeword buffer (the design
/// under verification for the sequential steps). The decoder writes its
/// corrected codeword back into the buffer when it finishes.
///
/// Inputs:  rst_n_i, enc_start_i, data_i[k], dec_start_i, cw_i[n]
/// Outputs: cw_o[n], enc_valid_o, enc_accept_o, enc_ready_o, enc_state_o[E+1],
///          decoder outputs (held), dec_valid_o, dec_accept_o, dec_state_o[D+1]
Circuit build_sequential_core(const CodeSpec& spec, const PipelineSchedule& sched);

/// "IDLE", "ENC2", "DET1", "COR1", or "+"-joined names for multi-hot values.
std::string encoder_stage_name(const BitVec& state);
std::string decoder_stage_name(const BitVec& state, const PipelineSchedule& sched);

}  // namespace eccprove
