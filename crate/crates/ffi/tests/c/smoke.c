/* Copyright 2026 MacroQ Contributors
 * SPDX-License-Identifier: Apache-2.0 */

#include <math.h>
#include <stdio.h>

#include "macroq.h"

int main(void) {
    MqState *thermal = NULL;
    if (mq_state_thermal(sqrt(2.0), 0, &thermal) != MQ_STATUS_OK) {
        fprintf(stderr, "construct: %s\n", mq_last_error_message());
        return 1;
    }
    MqMeasures m;
    if (mq_measure(thermal, &m) != MQ_STATUS_OK) {
        fprintf(stderr, "measure: %s\n", mq_last_error_message());
        return 1;
    }
    mq_state_free(thermal);
    if (fabs(m.i + 0.125) > 1e-12 || fabs(m.chi2 - 1.0) > 1e-12) {
        fprintf(stderr, "unexpected I=%.17g chi2=%.17g\n", m.i, m.chi2);
        return 1;
    }

    MqState *bad = NULL;
    MqStatus s = mq_state_fock(20, 10, &bad);
    if (s != MQ_STATUS_TRUNCATION || bad != NULL || mq_last_error_message() == NULL) {
        fprintf(stderr, "expected truncation status, got %d\n", (int)s);
        return 1;
    }
    printf("I=%.17g chi2=%.17g version=%s\n", m.i, m.chi2, mq_version());
    return 0;
}
