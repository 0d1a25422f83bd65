#include <stdio.h>
#include <string.h>

#include "torus_mirror.h"

#define CHECK(expr)                                                        \
    do {                                                                   \
        if (!(expr)) {                                                     \
            const char *msg = tm_last_error();                             \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #expr, \
                    msg ? msg : "no error");                               \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    TmSpec *spec = NULL;
    CHECK(tm_spec_builtin("hesse", &spec) == TM_STATUS_OK);

    int passed = 0;
    CHECK(tm_spec_validate(spec, &passed, NULL) == TM_STATUS_OK && passed == 1);

    TmRing *ring = NULL;
    CHECK(tm_ring_new(spec, tm_params_default(), &ring) == TM_STATUS_OK);
    tm_spec_free(spec);

    double buf[12];
    size_t written = 0;
    CHECK(tm_ring_product(ring, 1, 0, 1, 1, buf, 12, &written) == TM_STATUS_OK);
    CHECK(written == 12);

    TmRelationSet *set = NULL;
    size_t count = 0;
    CHECK(tm_ring_relations(ring, 3, 1, 1e-8, &set) == TM_STATUS_OK);
    CHECK(tm_relations_count(set, &count) == TM_STATUS_OK && count == 1);
    tm_relations_free(set);
    tm_ring_free(ring);

    CHECK(tm_spec_builtin("missing", &spec) == TM_STATUS_INPUT);
    CHECK(strstr(tm_last_error(), "unknown built-in") != NULL);

    char *json = NULL;
    CHECK(tm_verify_family("veronese", tm_params_default(), 1e-8, &json, &passed) == TM_STATUS_OK);
    CHECK(passed == 1 && strstr(json, "\"name\": \"veronese\"") != NULL);
    tm_string_free(json);

    printf("ok\n");
    return 0;
}
