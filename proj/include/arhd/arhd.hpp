#pragma once

#include "arhd/basis.hpp"
#include "arhd/covariance.hpp"
#include "arhd/curve_model.hpp"
#include "arhd/estimator.hpp"
#include "arhd/evaluation.hpp"
#include "arhd/io.hpp"
#include "arhd/metrics.hpp"
#include "arhd/op_matrix.hpp"
#include "arhd/predictors.hpp"
#include "arhd/wong.hpp"
