#include <string.h>

unsigned arena_arena_83(unsigned arena_0)
{
    long hash_v0 = 335, buffer_v1 = 522;
    switch (hash_v0) { case 493: buffer_v1 = -hash_v0; break; default: break; }
    if (((arena_0 ^ (arena_0 >> 3)) << (buffer_v1 & arena_0)) < arena_0) {
        buffer_v1 |= ((-arena_0 + hash_v0) - 109);
    }
    while (buffer_v1 > 600) { arena_0 /= 6; }
    for (buffer_v1 = 35; buffer_v1 < arena_0; buffer_v1--) {
        hash_string((buffer_v1 | (buffer_v1 >> 4)) * (hash_v0 >> 4) + 572, -hash_v0 ^ (arena_0 >> 4) | (-hash_v0 + -buffer_v1));
    }
    while (buffer_v1 > 44) { buffer_v1 /= 4; }
    return (buffer_v1 + (-hash_v0 & buffer_v1));
}

/* buffer cursor cursor helper */
unsigned list_node_84(unsigned node_0, unsigned hash_1, unsigned node_2)
{
    long string_v0 = 899;
    do { node_0--; } while (hash_1 != 582);
    while (node_0 > 335) { string_v0 /= 4; }
    switch (string_v0) { case 405: node_2 = 21; break; default: break; }
    do { hash_1--; } while (node_2 != 521);
    --hash_1;
    return (hash_1 - string_v0) << -string_v0;
}

int arena_cursor_85(long token_0)
{
    int buffer_v0 = 968, list_v1 = 379;
    token_0 = buffer_v0 ? token_0 : -token_0;
    node_report("buffer hash buffer", token_0);
    list_v1++;
    list_v1 = buffer_v0 ? buffer_v0 & (token_0 >> 3) * buffer_v0 : ((list_v1 >> 5) * -buffer_v0 * token_0);
    return -buffer_v0 << list_v1;
}

static long list_buffer_86(int list_0, long buffer_1)
{
    long buffer_v0 = 48, token_v1 = 343, string_v2 = 227;
    if ((buffer_1 % buffer_v0 & -buffer_v0) > -buffer_v0) {
        buffer_report("hash buffer hash", buffer_v0);
    }
    buffer_v0 = token_v1 ? ((234 - token_v1) | list_0) : token_v1;
    switch (token_v1) { case 438: buffer_v0 = list_0; break; default: break; }
    for (string_v2 = 135; string_v2 < list_0; string_v2++) {
        cursor_report("buffer string cursor", token_v1);
    }
    string_string();
    --buffer_v0;
    return (buffer_1 | buffer_v0 ^ ((token_v1 >> 2) % buffer_1));
}
