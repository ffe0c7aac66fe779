// Copyright 2026 The qicas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qicas/analysis.hpp"
#include "qicas/casci.hpp"
#include "qicas/correlation.hpp"
#include "qicas/determinant.hpp"
#include "qicas/errors.hpp"
#include "qicas/fci.hpp"
#include "qicas/fcidump.hpp"
#include "qicas/hamiltonian.hpp"
#include "qicas/io.hpp"
#include "qicas/optimizer.hpp"
#include "qicas/partition.hpp"
#include "qicas/pipeline.hpp"
#include "qicas/rdm.hpp"
#include "qicas/rotation.hpp"
#include "qicas/wavefunction.hpp"
