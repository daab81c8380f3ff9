#pragma once

#include <memory>

#include "parc/judge.hpp"

namespace parc {

std::unique_ptr<JudgeBackend> make_scripted_backend(const BackendConfig& config);
std::unique_ptr<JudgeBackend> make_endpoint_backend(const BackendConfig& config);

}  // namespace parc
