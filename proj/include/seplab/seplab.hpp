#pragma once

#include "errors.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "qrseq.hpp"
#include "stream.hpp"
#include "ensembles.hpp"
#include "criteria.hpp"
#include "rational.hpp"
#include "hypergeometric.hpp"
#include "chi.hpp"
#include "quadrature.hpp"
#include "probability.hpp"
#include "volumes.hpp"
#include "estimator.hpp"
#include "experiment.hpp"
