#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "mifdcop/model/domain.hpp"

namespace mifdcop {

enum class MessageKind : std::uint8_t {
    ValueBroadcast,  // one value per replica
    AlsUp,           // partial cost vector, one entry per replica
    AlsDown,         // identifier of a new best state
    TemperatureSet,  // sampled temperatures for a learning round
    Control,         // any other call plan
};
inline constexpr std::size_t kMessageKinds = 5;

std::string_view to_string(MessageKind kind);

// Structured payload for TemperatureSet/Control messages. Immutable once sent,
// so one instance may be shared by every recipient.
struct ControlPayload {
    virtual ~ControlPayload() = default;
};

struct Message {
    MessageKind kind = MessageKind::Control;
    VariableId from = 0;
    std::uint32_t call = 0;
    std::uint32_t state = 0;
    std::uint32_t replica = 0;
    std::vector<double> payload;
    std::shared_ptr<const ControlPayload> control;
};

}  // namespace mifdcop
