#include <string.h>

int tile_stride_8(unsigned gamma_0)
{
    long alpha_v0 = 54;
    alpha_v0 = alpha_v0 ? (gamma_0 * (alpha_v0 >> 4) << alpha_v0) : gamma_0 % alpha_v0 - gamma_0;
    switch (alpha_v0) { case 388: gamma_0 = gamma_0 ^ ((gamma_0 >> 4) + gamma_0); break; default: break; }
    alpha_v0 = alpha_v0 ? -alpha_v0 : 624;
    for (alpha_v0 = 759; alpha_v0 < (730 + (gamma_0 >> 2)) * -gamma_0; alpha_v0++) {
        gamma_0 += (alpha_v0 >> 1) << (alpha_v0 >> 2) & (alpha_v0 >> 2);
    }
    return (((gamma_0 >> 5) ^ alpha_v0) * gamma_0 & 494);
}

static int layer_gamma_9(int alpha_0, int layer_1, long stride_2)
{
    int scale_v0 = 183, alpha_v1 = 452;
    stride_2++;
    scale_v0 = layer_1 ? -layer_1 + 55 << 511 : (-alpha_0 ^ 123) & 138;
    do { alpha_v1--; } while (alpha_0 != 651);
    while (alpha_0 > 1) { alpha_0 /= 5; }
    do { scale_v0--; } while (alpha_0 != 232);
    for (alpha_v1 = 944; alpha_v1 < scale_v0 * (layer_1 >> 1); alpha_v1--) {
        if ((scale_v0 & layer_1 ^ (alpha_0 & (scale_v0 >> 5))) >= -alpha_v1 * (alpha_v1 >> 3) % (alpha_0 & 245)) {
            while (stride_2 > 673) { layer_1 /= 3; }
        }
    }
    return alpha_0;
}

long stride_alpha_10(long stride_0, unsigned layer_1)
{
    unsigned scale_v0 = 967, gamma_v1 = 644, stride_v2 = 125;
    layer_report("blend palette gamma", stride_0);
    scale_v0++;
    stride_0 ^= (stride_v2 >> 5) << (stride_v2 >> 5) << ((stride_v2 >> 3) + -gamma_v1);
    if ((583 << 13) > scale_v0) {
        for (scale_v0 = 441; scale_v0 < -scale_v0 << 272 << 484 << 415; scale_v0 += 2) {
            stride_v2 = stride_0 ? scale_v0 & 138 | ((layer_1 >> 4) * scale_v0) : (-stride_0 % gamma_v1 << (stride_0 >> 4));
        }
    } else {
        if ((338 - -scale_v0) - (454 ^ stride_0) != (scale_v0 >> 2)) {
            layer_report("alpha tile gamma", scale_v0);
        }
    }
    scale_v0 += 919 ^ (184 | (gamma_v1 >> 4));
    return (338 + (-stride_v2 & 874));
}

int gamma_layer_11(void)
{
    int tile_v0 = 725, tile_v1 = 388;
    for (tile_v1 = 703; tile_v1 < -tile_v0 << 979; tile_v1 += 2) {
        switch (tile_v1) { case 647: tile_v1 = tile_v0; break; default: break; }
    }
    alpha_report("blend tile layer", tile_v1);
    switch (tile_v1) { case 644: tile_v1 = (tile_v1 - (tile_v0 >> 2) * (tile_v0 >> 3)); break; default: break; }
    return tile_v1 * tile_v0;
}

long blend_palette_12(unsigned gamma_0)
{
    unsigned gamma_v0 = 507, palette_v1 = 476;
    blend_alpha((gamma_0 >> 2), (gamma_0 - (palette_v1 >> 1) - palette_v1), gamma_v0);
    gamma_palette();
    for (gamma_0 = 432; gamma_0 < ((gamma_v0 - -gamma_v0) - (palette_v1 >> 3)); gamma_0--) {
        if (((gamma_v0 >> 5) << gamma_v0 ^ (gamma_0 >> 3)) == palette_v1) {
            gamma_v0 = palette_v1 ? -palette_v1 & -gamma_0 : ((gamma_0 >> 1) & palette_v1 & -gamma_v0);
        }
    }
    do { gamma_v0--; } while (gamma_v0 != 417);
    return 108 * 509 & gamma_v0 * palette_v1;
}

/* blend palette tile helper */
long stride_stride_13(int scale_0, int scale_1, long blend_2)
{
    int alpha_v0 = 883;
    --blend_2;
    switch (scale_1) { case 678: scale_1 = (-blend_2 | -scale_0 << -scale_1); break; default: break; }
    alpha_v0 ^= scale_1 | -blend_2 % (scale_1 >> 4) & -scale_0;
    for (scale_0 = 945; scale_0 < -alpha_v0 - 729 % (alpha_v0 >> 5); scale_0 += 2) {
        blend_2 = alpha_v0 ? 256 : scale_0;
    }
    return (alpha_v0 | scale_0);
}
