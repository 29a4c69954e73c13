// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "expdisc/bisection.hpp"
#include "expdisc/dataset.hpp"
#include "expdisc/ed.hpp"
#include "expdisc/garp.hpp"
#include "expdisc/indices.hpp"
#include "expdisc/oracle.hpp"
#include "expdisc/synthgen.hpp"
