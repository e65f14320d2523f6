#pragma once

#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>

namespace ttvr {

/// Value-or-error return type for operations whose failures are expected
/// (backend faults, malformed model output). Contract violations throw.
template <typename T, typename E>
class Result {
public:
    Result(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
    Result(E error) : storage_(std::in_place_index<1>, std::move(error)) {}

    [[nodiscard]] bool has_value() const noexcept { return storage_.index() == 0; }
    explicit operator bool() const noexcept { return has_value(); }

    [[nodiscard]] T& value() & { return checked_value(); }
    [[nodiscard]] const T& value() const& { return const_cast<Result*>(this)->checked_value(); }
    [[nodiscard]] T&& value() && { return std::move(checked_value()); }

    [[nodiscard]] const E& error() const& {
        if (has_value()) {
            throw std::logic_error("Result::error() called on a value");
        }
        return std::get<1>(storage_);
    }

    T* operator->() { return &checked_value(); }
    const T* operator->() const { return &value(); }
    T& operator*() & { return checked_value(); }
    const T& operator*() const& { return value(); }

private:
    T& checked_value() {
        if (!has_value()) {
            throw std::logic_error("Result::value() called on an error");
        }
        return std::get<0>(storage_);
    }

    std::variant<T, E> storage_;
};

} // namespace ttvr
