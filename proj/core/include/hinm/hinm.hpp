#pragma once

#include "hinm/config.hpp"
#include "hinm/encoding.hpp"
#include "hinm/errors.hpp"
#include "hinm/gyro.hpp"
#include "hinm/hnmw.hpp"
#include "hinm/hungarian.hpp"
#include "hinm/json_io.hpp"
#include "hinm/kmeans.hpp"
#include "hinm/matrix.hpp"
#include "hinm/oracle.hpp"
#include "hinm/permutation.hpp"
#include "hinm/pruner.hpp"
#include "hinm/rational.hpp"
#include "hinm/report.hpp"
#include "hinm/rng.hpp"
#include "hinm/spmm.hpp"
