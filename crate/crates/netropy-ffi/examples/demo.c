/* Minimal C client: loads a price CSV, analyzes one year, prints the
 * per-stock metrics and the spanning-tree edges.
 *
 * Build (after `cargo build -p netropy-ffi --release`):
 *
 *   cc demo.c -I../include \
 *      -L../../../target/release -lnetropy_ffi -lm -o demo
 *
 * Run: ./demo prices.csv sectors.csv 2000
 */

#include <netropy.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static unsigned char *slurp(const char *path, size_t *len) {
    FILE *f = fopen(path, "rb");
    if (!f) {
        return NULL;
    }
    fseek(f, 0, SEEK_END);
    long size = ftell(f);
    fseek(f, 0, SEEK_SET);
    unsigned char *buf = malloc(size > 0 ? (size_t)size : 1);
    if (buf && fread(buf, 1, (size_t)size, f) != (size_t)size) {
        free(buf);
        buf = NULL;
    }
    fclose(f);
    if (buf) {
        *len = (size_t)size;
    }
    return buf;
}

int main(int argc, char **argv) {
    if (argc < 4) {
        fprintf(stderr, "usage: %s prices.csv sectors.csv year\n", argv[0]);
        return 2;
    }
    printf("netropy %s\n", ntp_version());

    size_t prices_len = 0, sectors_len = 0;
    unsigned char *prices = slurp(argv[1], &prices_len);
    unsigned char *sectors = slurp(argv[2], &sectors_len);
    if (!prices) {
        fprintf(stderr, "cannot read %s\n", argv[1]);
        return 2;
    }

    NtpPanel *panel = NULL;
    NtpStatus status = ntp_panel_load(prices, prices_len, sectors, sectors_len,
                                      250, &panel);
    free(prices);
    free(sectors);
    if (status != NTP_OK) {
        fprintf(stderr, "load failed (%d): %s\n", status, ntp_last_error());
        return 1;
    }
    printf("%zu eligible series\n", ntp_panel_series_count(panel));

    NtpYear *year = NULL;
    status = ntp_panel_analyze_year(panel, atoi(argv[3]), 4, false, &year);
    if (status != NTP_OK) {
        fprintf(stderr, "analysis failed (%d): %s\n", status, ntp_last_error());
        ntp_panel_free(panel);
        return 1;
    }

    size_t n = ntp_year_stock_count(year);
    printf("year %d: %zu stocks\n", ntp_year_number(year), n);
    for (size_t i = 0; i < n; i++) {
        const char *ticker = NULL;
        const char *sector = NULL;
        double mean, sd, entropy, centrality;
        ntp_year_ticker(year, i, &ticker);
        ntp_year_sector(year, i, &sector);
        ntp_year_metric(year, i, NTP_METRIC_MEAN_RETURN, &mean);
        ntp_year_metric(year, i, NTP_METRIC_SD_RETURN, &sd);
        ntp_year_metric(year, i, NTP_METRIC_ENTROPY_BITS, &entropy);
        ntp_year_metric(year, i, NTP_METRIC_CENTRALITY, &centrality);
        printf("  %-10s %-14s mean=% .3e sd=%.3e H=%.3f c=%.4f\n", ticker,
               sector, mean, sd, entropy, centrality);
    }

    size_t edges = ntp_year_edge_count(year);
    for (size_t i = 0; i < edges; i++) {
        size_t a, b;
        double weight, rho;
        const char *ta = NULL;
        const char *tb = NULL;
        ntp_year_edge(year, i, &a, &b, &weight, &rho);
        ntp_year_ticker(year, a, &ta);
        ntp_year_ticker(year, b, &tb);
        printf("  %s -- %s  d=%.4f rho=%.4f\n", ta, tb, weight, rho);
    }

    char *dot = NULL;
    if (ntp_year_dot(year, &dot) == NTP_OK) {
        printf("%s", dot);
        ntp_string_free(dot);
    }

    ntp_year_free(year);
    ntp_panel_free(panel);
    return 0;
}
