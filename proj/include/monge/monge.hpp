#pragma once

// Convenience umbrella for the whole toolkit.

#include "monge/diff_ops.hpp"
#include "monge/estimators.hpp"
#include "monge/experiments.hpp"
#include "monge/geometry.hpp"
#include "monge/matrix_io.hpp"
#include "monge/projection.hpp"
#include "monge/rng.hpp"
#include "monge/sorting.hpp"
#include "monge/svd.hpp"
#include "monge/svt.hpp"
#include "monge/synthetic.hpp"
#include "monge/types.hpp"
