// Copyright 2026 The paqs-sim Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "paqs/core/linalg.hpp"
#include "paqs/core/rng.hpp"
#include "paqs/core/types.hpp"
#include "paqs/feedback/coefficients.hpp"
#include "paqs/feedback/decide.hpp"
#include "paqs/feedback/rotation.hpp"
#include "paqs/io/csv.hpp"
#include "paqs/io/manifest.hpp"
#include "paqs/io/schedule_io.hpp"
#include "paqs/io/sha256.hpp"
#include "paqs/protocols/build.hpp"
#include "paqs/protocols/config.hpp"
#include "paqs/protocols/ensemble.hpp"
#include "paqs/protocols/run.hpp"
#include "paqs/protocols/schedule.hpp"
#include "paqs/sme/averaged.hpp"
#include "paqs/sme/steppers.hpp"
#include "paqs/symmetry/dicke.hpp"
#include "paqs/symmetry/ghz.hpp"
#include "paqs/tangle/protocol.hpp"
#include "paqs/tangle/three_tangle.hpp"
#include "paqs/version.hpp"
