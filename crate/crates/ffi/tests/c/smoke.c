#include <stdio.h>
#include <string.h>
#include "ggauss.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, gg_last_error_message()); return 1; } } while (0)

int main(void) {
    uint32_t pairs[] = {1, 3, 2, 4, 5, 6};
    GgPairing *p = NULL;
    CHECK(gg_pairing_new(pairs, 3, &p) == GG_STATUS_OK);
    GgChordStats s;
    CHECK(gg_pairing_stats(p, &s) == GG_STATUS_OK);
    CHECK(s.crossings == 1 && s.singletons == 1 && s.components == 2 && s.non_singletons == 2);
    gg_pairing_free(p);

    uint32_t bad[] = {1, 2, 2, 3};
    CHECK(gg_pairing_new(bad, 2, &p) == GG_STATUS_INVALID_ARGUMENT);
    CHECK(strlen(gg_last_error_message()) > 0);

    char *seq = NULL;
    CHECK(gg_sequence(GG_SEQUENCE_SINGLETONS, 5, false, &seq) == GG_STATUS_OK);
    CHECK(strcmp(seq, "1,4,21,144,1245") == 0);
    gg_string_free(seq);

    GgMoments *m = NULL;
    CHECK(gg_moments_new(GG_WEIGHT_SINGLETON_POWER, "2", 3, false, &m) == GG_STATUS_OK);
    char *v = NULL;
    CHECK(gg_moments_moment(m, 3, &v) == GG_STATUS_OK);
    CHECK(strcmp(v, "56") == 0);
    gg_string_free(v);
    gg_moments_free(m);

    printf("ok %s\n", gg_version());
    return 0;
}
