#pragma once

#include "dcm/exact.hpp"

#include <filesystem>
#include <optional>
#include <ostream>

namespace dcm::tools {

struct ReproduceOptions {
    std::filesystem::path fixtures;
    std::optional<Exact> lambda_23;
    std::optional<Exact> z;
};

// 0 when every published figure is reproduced, 1 on a mismatch, 2 when the
// fixtures cannot be read.
int reproduce(const ReproduceOptions& options, std::ostream& out);

}  // namespace dcm::tools
