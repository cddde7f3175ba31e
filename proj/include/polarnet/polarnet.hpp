#ifndef POLARNET_POLARNET_HPP
#define POLARNET_POLARNET_HPP

#include "polarnet/config.hpp"
#include "polarnet/epidemic.hpp"
#include "polarnet/experiment.hpp"
#include "polarnet/generators.hpp"
#include "polarnet/graph.hpp"
#include "polarnet/metrics.hpp"
#include "polarnet/report.hpp"
#include "polarnet/rng.hpp"

#endif  // POLARNET_POLARNET_HPP
