// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace paqs {

inline constexpr const char* kToolName = "paqs-sim";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace paqs
