/* Builds a small 3 x 3 grid network through the C API and checks flow,
 * tree and bottleneck calls. Exit status 0 means every check passed. */
#include <stdio.h>
#include <string.h>

#include "slopeflow.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    /* 3 x 3 grid numbered 1..9 row by row, stored as 0..8. */
    size_t lo[] = {0, 1, 3, 4, 6, 7, 0, 1, 2, 3, 4, 5};
    size_t hi[] = {1, 2, 4, 5, 7, 8, 3, 4, 5, 6, 7, 8};
    double cap[] = {4, 4, 3, 3, 1, 4, 2, 2, 1, 3, 1, 1};
    SfNetwork *net = NULL;
    CHECK(sf_network_new(9, lo, hi, cap, 12, &net) == SF_STATUS_OK);
    CHECK(sf_network_node_count(net) == 9);

    double flow = 0.0;
    CHECK(sf_max_flow(net, 0, 8, &flow) == SF_STATUS_OK);

    SfTree *tree = NULL;
    CHECK(sf_tree_new(net, &tree) == SF_STATUS_OK);
    double value = 0.0;
    CHECK(sf_tree_min_cut_value(tree, 0, 8, &value) == SF_STATUS_OK);
    CHECK(value == flow);

    SfCut *cut = NULL;
    CHECK(sf_bottleneck(tree, net, 0.3, 1.0, &cut) == SF_STATUS_OK);
    size_t side[9];
    size_t k = sf_cut_side(cut, side, 9);
    CHECK(k >= 1 && k <= 9);
    CHECK(sf_cut_ratio(cut) >= 0.3);

    CHECK(sf_max_flow(net, 3, 3, &flow) == SF_STATUS_INVALID_ARGUMENT);
    char msg[256];
    CHECK(sf_last_error(msg, sizeof msg) > 1);
    CHECK(strlen(msg) > 0);

    sf_cut_free(cut);
    sf_tree_free(tree);
    sf_network_free(net);
    printf("ok %s\n", sf_version());
    return 0;
}
