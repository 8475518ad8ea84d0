#include "erps/log.hpp"

#include <iostream>
#include <mutex>

namespace erps {
namespace {

std::mutex& handler_mutex() {
    static std::mutex m;
    return m;
}

WarningHandler& handler_slot() {
    static WarningHandler h;
    return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(handler_mutex());
    auto previous = std::move(handler_slot());
    handler_slot() = std::move(handler);
    return previous;
}

void warn(const std::string& message) {
    std::lock_guard lock(handler_mutex());
    if (handler_slot()) {
        handler_slot()(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

}  // namespace erps
