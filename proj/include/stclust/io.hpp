#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "stclust/core.hpp"
#include "stclust/evaluation.hpp"
#include "stclust/ingest.hpp"
#include "stclust/synth.hpp"

namespace stclust {

// Doubles are written with std::to_chars (shortest round-trip form) so output
// is byte-stable for identical inputs and parses back to the same value.
std::string format_double(double value);

const char* algorithm_name(Algorithm algorithm);

void write_records_csv(std::ostream& out, const std::vector<TweetRecord>& records);
void write_records_jsonl(std::ostream& out, const std::vector<TweetRecord>& records);

// One row per dataset point, in input-record order: id,relevance,cluster,core,mu.
// cluster is `noise` or the 1-based cluster id; mu stays empty for crisp runs.
void write_labels_csv(std::ostream& out, const std::vector<TweetRecord>& records,
                      const LabeledDataset& dataset, const ClusteringResult& result);

// Shared schema for sweep.csv, best.csv and report.csv:
// algorithm,epsilon,n_min,n_max,n_min1,n_min2,n_max1,n_max2,alpha,
// tp,fp,fn,precision,recall,f1,area_m2,area_norm,score
// Parameter columns that don't apply to a row stay empty.
void write_rows_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// FeatureCollection with one Polygon feature per cluster (hull ring in
// lon,lat). Degenerate clusters come out as a 32-gon of radius epsilon.
void write_clusters_geojson(std::ostream& out, const LabeledDataset& dataset,
                            const ClusteringResult& result, double epsilon);

// Flat map of the run: region circle, points colored by assignment, hulls.
void write_map_svg(std::ostream& out, const LabeledDataset& dataset,
                   const ClusteringResult& result, const QueryRegion& region);

void write_knn_csv(std::ostream& out, const std::vector<double>& profile);
void write_knn_svg(std::ostream& out, const std::vector<double>& profile, int k);

void write_bench_csv(std::ostream& out, const BenchReport& report);
std::string bench_summary_json(const BenchReport& report);

}  // namespace stclust
