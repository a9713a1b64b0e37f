#pragma once

#include "cdqvi/contact.hpp"

#include <filesystem>
#include <string>

namespace cdqvi {

// Instance files are JSON:
//   { "N": int, "m": int, "A": [[...]], "B": [[...]], "c": [...],
//     "C" | "D": [[...]], "fext" | "e": [...], "phi": real, "l": real,
//     "meta": {...} }
// Exactly one of C/D and one of fext/e must be present. Matrices are dense and
// row-major. Doubles are written in shortest round-trip form.

std::string instance_to_json(const ContactProblem& problem);
ContactProblem instance_from_json(const std::string& text);

void save_instance(const ContactProblem& problem, const std::filesystem::path& path);
ContactProblem load_instance(const std::filesystem::path& path);

/// Reads {"C": [[...]]} (or a full instance file carrying C).
Mat load_stiffness_file(const std::filesystem::path& path);

}  // namespace cdqvi
