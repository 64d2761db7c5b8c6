#include <stdio.h>
#include <string.h>
#include "ltsi.h"

static const char *DIAMOND =
    "ltsi-v1\n"
    "state P\nstate Q\nstate R\nstate S\n"
    "trans t P a Q\ntrans u P b R\ntrans u2 Q b S\ntrans t2 R a S\n"
    "ind t u\nind ~t u2\nind t2 ~u\nind ~t2 ~u2\n";

int main(void) {
    LtsiSystem *h = NULL;
    if (ltsi_parse(DIAMOND, &h) != LTSI_ERROR_OK) return 1;
    if (ltsi_state_count(h) != 4 || ltsi_transition_count(h) != 4) return 2;

    LtsiStatus st;
    if (ltsi_check(h, "PREREV", &st) != LTSI_ERROR_OK || st != LTSI_STATUS_HOLDS) return 3;
    if (ltsi_check(h, "nope", &st) != LTSI_ERROR_UNKNOWN_CHECK || ltsi_last_error() == NULL) return 4;

    LtsiEquiv eq;
    if (ltsi_equiv(h, "t u2", "u t2", 2, &eq) != LTSI_ERROR_OK || eq != LTSI_EQUIV_YES) return 5;

    char *text = NULL;
    if (ltsi_emit(h, &text) != LTSI_ERROR_OK || strncmp(text, "ltsi-v1", 7) != 0) return 6;
    ltsi_string_free(text);
    ltsi_free(h);

    if (ltsi_parse("garbage", &h) != LTSI_ERROR_PARSE) return 7;
    puts("ok");
    return 0;
}
