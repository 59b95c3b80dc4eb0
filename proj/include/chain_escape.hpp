// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chain_escape/asymptotics.hpp"
#include "chain_escape/energy.hpp"
#include "chain_escape/equilibrium.hpp"
#include "chain_escape/error.hpp"
#include "chain_escape/integrator.hpp"
#include "chain_escape/model.hpp"
#include "chain_escape/spectral.hpp"
#include "chain_escape/trajectory.hpp"
