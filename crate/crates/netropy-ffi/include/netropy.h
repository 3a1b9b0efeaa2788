/* C interface to the netropy analytics library. Generated by cbindgen; do not edit. */

#ifndef NETROPY_H
#define NETROPY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code returned by every fallible function in this library.
 */
typedef enum {
  /**
   * The call succeeded.
   */
  NTP_OK = 0,
  /**
   * A required pointer argument was null.
   */
  NTP_ERR_NULL_POINTER = 1,
  /**
   * An argument value was rejected before any computation started.
   */
  NTP_ERR_INVALID_ARGUMENT = 2,
  /**
   * Input bytes could not be parsed.
   */
  NTP_ERR_PARSE = 3,
  /**
   * Inputs were well formed but too small for the computation.
   */
  NTP_ERR_NOT_ENOUGH_DATA = 4,
  /**
   * The computation failed on degenerate or inconsistent data.
   */
  NTP_ERR_COMPUTE = 5,
} NtpStatus;

/**
 * Per-stock metric selector for [`ntp_year_metric`].
 */
typedef enum {
  /**
   * Mean daily log return.
   */
  NTP_METRIC_MEAN_RETURN = 0,
  /**
   * Sample standard deviation of daily log returns.
   */
  NTP_METRIC_SD_RETURN = 1,
  /**
   * Lempel-Ziv entropy rate of the discretized returns, bits/symbol.
   */
  NTP_METRIC_ENTROPY_BITS = 2,
  /**
   * Random-walk centrality in the year's minimum spanning tree.
   */
  NTP_METRIC_CENTRALITY = 3,
} NtpMetric;

/**
 * An eligible price panel: parsed, sector-labelled, filtered series.
 */
typedef struct NtpPanel NtpPanel;

/**
 * The completed analysis of one calendar year.
 */
typedef struct NtpYear NtpYear;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *ntp_version(void);

/**
 * Message for the most recent failure on the calling thread.
 *
 * Returns an empty string when nothing has failed yet. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ntp_last_error(void);

/**
 * Parses price CSV bytes (`ticker,date,close`) plus optional sector CSV
 * bytes (`ticker,sector`) and keeps the series whose longest run of
 * consecutive union-calendar trading days reaches `min_consecutive_days`.
 *
 * `sectors` may be null (with `sectors_len` 0) when no sector table is
 * available; series then carry the "unclassified" label. On success `*out`
 * owns the panel and must be released with [`ntp_panel_free`].
 *
 * # Safety
 *
 * `prices` must point to `prices_len` readable bytes, `sectors` to
 * `sectors_len` readable bytes when non-null, and `out` to a writable
 * pointer slot.
 */
NtpStatus ntp_panel_load(const uint8_t *prices,
                         size_t prices_len,
                         const uint8_t *sectors,
                         size_t sectors_len,
                         size_t min_consecutive_days,
                         NtpPanel **out);

/**
 * Releases a panel handle. Null is ignored.
 *
 * # Safety
 *
 * `panel` must be null or a pointer obtained from [`ntp_panel_load`] that
 * has not been freed yet.
 */
void ntp_panel_free(NtpPanel *panel);

/**
 * Number of eligible series held by the panel. Null yields 0.
 *
 * # Safety
 *
 * `panel` must be null or a live panel handle.
 */
size_t ntp_panel_series_count(const NtpPanel *panel);

/**
 * Writes the calendar years observed in the panel into `out` (at most
 * `cap` entries, ascending) and the total year count into `n_out`. Call
 * with `cap` 0 to size the buffer first.
 *
 * # Safety
 *
 * `panel` must be a live panel handle, `out` must point to `cap` writable
 * `int32_t` slots (may be null when `cap` is 0), and `n_out` must be
 * writable.
 */
NtpStatus ntp_panel_years(const NtpPanel *panel, int32_t *out, size_t cap, size_t *n_out);

/**
 * Runs the yearly analysis — log returns, Pearson correlations, minimum
 * spanning tree, random-walk centrality, entropy rates, aggregates — over
 * the panel stocks with a complete observation set for `year`.
 *
 * `state_count` is the alphabet size for return discretization (the usual
 * choice is 4). `alt_distance` selects `sqrt(2(1-rho))` edge weights
 * instead of the default `1 - rho^2`. On success `*out` owns the result
 * and must be released with [`ntp_year_free`].
 *
 * # Safety
 *
 * `panel` must be a live panel handle and `out` a writable pointer slot.
 */
NtpStatus ntp_panel_analyze_year(const NtpPanel *panel,
                                 int32_t year,
                                 size_t state_count,
                                 bool alt_distance,
                                 NtpYear **out);

/**
 * Releases a year handle. Null is ignored.
 *
 * # Safety
 *
 * `year` must be null or a pointer obtained from [`ntp_panel_analyze_year`]
 * that has not been freed yet.
 */
void ntp_year_free(NtpYear *year);

/**
 * The calendar year the handle describes. Null yields 0.
 *
 * # Safety
 *
 * `year` must be null or a live year handle.
 */
int32_t ntp_year_number(const NtpYear *year);

/**
 * Number of stocks analyzed for the year. Null yields 0.
 *
 * # Safety
 *
 * `year` must be null or a live year handle.
 */
size_t ntp_year_stock_count(const NtpYear *year);

/**
 * Borrowed pointer to the ticker at `idx`, valid until the handle is freed.
 *
 * # Safety
 *
 * `year` must be a live year handle and `out` a writable pointer slot.
 */
NtpStatus ntp_year_ticker(const NtpYear *year, size_t idx, const char **out);

/**
 * Borrowed pointer to the sector label at `idx`, valid until the handle is
 * freed.
 *
 * # Safety
 *
 * `year` must be a live year handle and `out` a writable pointer slot.
 */
NtpStatus ntp_year_sector(const NtpYear *year, size_t idx, const char **out);

/**
 * One per-stock metric value, indexed consistently with
 * [`ntp_year_ticker`].
 *
 * # Safety
 *
 * `year` must be a live year handle and `out` a writable double slot.
 */
NtpStatus ntp_year_metric(const NtpYear *year, size_t idx, NtpMetric metric, double *out);

/**
 * Number of edges in the year's minimum spanning tree (stock count minus
 * one). Null yields 0.
 *
 * # Safety
 *
 * `year` must be null or a live year handle.
 */
size_t ntp_year_edge_count(const NtpYear *year);

/**
 * One tree edge: endpoint indices into the stock indexing shared with
 * [`ntp_year_ticker`], the distance weight, and the underlying Pearson
 * correlation.
 *
 * # Safety
 *
 * `year` must be a live year handle; `a`, `b`, `weight`, and `rho` must be
 * writable.
 */
NtpStatus ntp_year_edge(const NtpYear *year,
                        size_t idx,
                        size_t *a,
                        size_t *b,
                        double *weight,
                        double *rho);

/**
 * Renders the year's tree as Graphviz DOT with sector and mean-return node
 * attributes. On success `*out` is a caller-owned string; release it with
 * [`ntp_string_free`].
 *
 * # Safety
 *
 * `year` must be a live year handle and `out` a writable pointer slot.
 */
NtpStatus ntp_year_dot(const NtpYear *year, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 *
 * `s` must be null or a string obtained from a `char**` out-parameter of
 * this library that has not been freed yet.
 */
void ntp_string_free(char *s);

/**
 * Computes daily log returns, `out[i] = ln(closes[i+1] / closes[i])`.
 *
 * Closes must be positive and finite and `n` at least 2; `out` must hold
 * `n - 1` doubles.
 *
 * # Safety
 *
 * `closes` must point to `n` readable doubles and `out` to `n - 1`
 * writable doubles.
 */
NtpStatus ntp_log_returns(const double *closes, size_t n, double *out);

/**
 * Rank-discretizes `values` into `states` symbols with equal populations;
 * earlier indices take the lower state on ties. `out` must hold `n`
 * entries.
 *
 * # Safety
 *
 * `values` must point to `n` readable doubles and `out` to `n` writable
 * `uint16_t` slots.
 */
NtpStatus ntp_discretize(const double *values, size_t n, size_t states, uint16_t *out);

/**
 * Estimates the entropy rate of a discrete sequence in bits per symbol
 * using the Lempel-Ziv match-length estimator.
 *
 * # Safety
 *
 * `symbols` must point to `n` readable `uint16_t` values and `out` to a
 * writable double.
 */
NtpStatus ntp_entropy_rate(const uint16_t *symbols, size_t n, double *out);

/**
 * Random-walk centrality of every node of an undirected tree given as an
 * edge list over node indices `0..n_nodes`. Requires exactly
 * `n_nodes - 1` edges forming a connected graph; `out` must hold
 * `n_nodes` doubles.
 *
 * # Safety
 *
 * `edge_a` and `edge_b` must point to `n_edges` readable `size_t` values
 * and `out` to `n_nodes` writable doubles.
 */
NtpStatus ntp_tree_centrality(size_t n_nodes,
                              const size_t *edge_a,
                              const size_t *edge_b,
                              size_t n_edges,
                              double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NETROPY_H */
