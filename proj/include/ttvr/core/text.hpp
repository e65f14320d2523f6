#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ttvr::text {

[[nodiscard]] bool is_space(char c) noexcept;
[[nodiscard]] std::string_view trim(std::string_view s) noexcept;
[[nodiscard]] bool starts_with_ci(std::string_view s, std::string_view prefix) noexcept;

/// Splits on '\n', dropping a trailing '\r' from each line.
[[nodiscard]] std::vector<std::string_view> lines(std::string_view s);

/// Splits on every `sep`; empty fields are kept.
[[nodiscard]] std::vector<std::string_view> split(std::string_view s, char sep);

/// Number of maximal runs of non-whitespace characters.
[[nodiscard]] std::size_t count_tokens(std::string_view s) noexcept;

[[nodiscard]] bool contains(std::string_view haystack, std::string_view needle) noexcept;

[[nodiscard]] std::string replace_all(std::string_view s, std::string_view from,
                                      std::string_view to);

} // namespace ttvr::text
