#include <stdio.h>
#include <string.h>

#include "opcomp.h"

static const char *WORKED =
    "{\"operator\":[[\"1\",\"2\"],[\"3\",\"4\"]],"
    "\"M\":{\"ambient_dim\":2,\"span\":[[\"1\",\"0\"]]},"
    "\"N\":{\"ambient_dim\":2,\"span\":[[\"1\",\"0\"]]}}";

int main(void) {
    OcInstance *inst = NULL;
    if (oc_instance_from_json(WORKED, &inst) != OC_STATUS_OK) {
        fprintf(stderr, "parse failed: %s\n", oc_last_error());
        return 1;
    }
    char *schur = NULL;
    if (oc_instance_schur(inst, &schur) != OC_STATUS_OK) {
        fprintf(stderr, "schur failed: %s\n", oc_last_error());
        return 1;
    }
    printf("%s\n", schur);
    int ok = strcmp(schur, "[[\"-1/2\",\"0\"],[\"0\",\"0\"]]") == 0;
    oc_string_free(schur);
    oc_instance_free(inst);

    OcInstance *bad = NULL;
    if (oc_instance_from_json("{\"operator\":", &bad) != OC_STATUS_MALFORMED_INPUT || bad != NULL) {
        return 1;
    }
    return ok ? 0 : 1;
}
