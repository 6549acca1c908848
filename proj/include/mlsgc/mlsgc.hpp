#ifndef MLSGC_MLSGC_HPP
#define MLSGC_MLSGC_HPP

/// \file
/// Multilayer spectral graph clustering via convex layer aggregation.
///
/// graph.hpp        multilayer graphs, cluster assignments, layer weights, Laplacians
/// graph_io.hpp     edge-list and label file formats
/// spectral.hpp     smallest eigenpairs, embeddings, partial eigenvalue sums, principal angles
/// kmeans.hpp       K-means with careful seeding and restarts
/// assignment.hpp   Hungarian matching and detectability
/// clustering.hpp   the aggregate-embed-cluster pipeline
/// noise.hpp        between-cluster noise parameters
/// synth.hpp        synthetic multilayer generators
/// phase.hpp        critical-value bounds and phase diagnostics
/// experiments.hpp  detectability sweeps and CSV tables
/// svg.hpp          heatmaps and curves

#include "mlsgc/assignment.hpp"
#include "mlsgc/clustering.hpp"
#include "mlsgc/errors.hpp"
#include "mlsgc/experiments.hpp"
#include "mlsgc/graph.hpp"
#include "mlsgc/graph_io.hpp"
#include "mlsgc/kmeans.hpp"
#include "mlsgc/noise.hpp"
#include "mlsgc/parallel.hpp"
#include "mlsgc/phase.hpp"
#include "mlsgc/random.hpp"
#include "mlsgc/spectral.hpp"
#include "mlsgc/svg.hpp"
#include "mlsgc/synth.hpp"

#endif  // MLSGC_MLSGC_HPP
