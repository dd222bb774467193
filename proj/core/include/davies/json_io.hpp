#pragma once

#include <initializer_list>
#include <string>

#include <nlohmann/json.hpp>

#include "davies/event.hpp"
#include "davies/linalg.hpp"

namespace davies {

// Complex scalars are [re, im]; matrices are row-major nested arrays.
nlohmann::json to_json(Complex c);
nlohmann::json to_json(const Complex2x2& a);
nlohmann::json to_json(const Superop& s);
nlohmann::json to_json(const Event& e);

Complex complex_from_json(const nlohmann::json& j, const std::string& what);
Complex2x2 matrix_from_json(const nlohmann::json& j, const std::string& what);

// {"horizon": t, "forward_outside": "zero" | "unconstrained",
//  "side_outside": ..., "windows": [{"channel": "forward" | "side",
//  "window": [a, b], "count": n}, ...]}
Event event_from_json(const nlohmann::json& j);

// Throws ValidationError naming the first key of `j` outside `allowed`.
void require_known_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                        const std::string& where);

}  // namespace davies
