#ifndef HRLAB_HRLAB_HPP
#define HRLAB_HRLAB_HPP

#include "hrlab/core/error.hpp"
#include "hrlab/core/io.hpp"
#include "hrlab/core/parallel.hpp"
#include "hrlab/core/random.hpp"
#include "hrlab/core/version.hpp"
#include "hrlab/geometry/fields.hpp"
#include "hrlab/geometry/phase_point.hpp"
#include "hrlab/geometry/randers.hpp"
#include "hrlab/dynamics/schedule.hpp"
#include "hrlab/dynamics/flow.hpp"
#include "hrlab/lipschitz/estimate.hpp"
#include "hrlab/lipschitz/decomposition.hpp"
#include "hrlab/concentration/profile.hpp"
#include "hrlab/observables/ensemble.hpp"
#include "hrlab/observables/wep.hpp"
#include "hrlab/gravity/scales.hpp"

#endif  // HRLAB_HRLAB_HPP
