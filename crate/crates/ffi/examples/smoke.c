#include <assert.h>
#include <math.h>
#include <stdio.h>
#include "edgepart.h"

int main(void) {
    uint64_t endpoints[] = {0, 1, 1, 2, 0, 2};
    EpGraph *g = NULL;
    assert(ep_graph_from_edges(3, endpoints, 3, &g) == EP_OK);
    assert(ep_graph_vertex_count(g) == 3);
    assert(fabs(ep_graph_average_degree(g) - 2.0) < 1e-12);

    EpPartition *p = NULL;
    assert(ep_partition_hash(g, 3, 1000, &p) == EP_OK);
    assert(fabs(ep_partition_replication_factor(p) - 2.0) < 1e-12);
    assert(ep_partition_is_balanced(p));

    EpRefineStats stats;
    assert(ep_refine_lsg(p, 1, &stats) == EP_OK);
    assert(stats.rf_after <= stats.rf_before);

    EpGraph *bad = NULL;
    assert(ep_graph_load_file("/no/such/file", &bad) == EP_IO);
    char *msg = ep_last_error_message();
    assert(msg != NULL);
    printf("expected error: %s\n", msg);
    ep_string_free(msg);

    ep_partition_free(p);
    ep_graph_free(g);
    printf("C API smoke test passed\n");
    return 0;
}
