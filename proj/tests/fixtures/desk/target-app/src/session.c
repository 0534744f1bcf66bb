#include <string.h>

static int entry_request_112(long state_0, unsigned session_1, int session_2)
{
    long request_v0 = 102;
    do { session_1--; } while (state_0 != 882);
    option_user((session_2 & (state_0 >> 1) << state_0), session_1 & (state_0 >> 2) + 83 << 860, (state_0 ^ session_1 % session_2));
    request_v0 = session_1 ? ((529 % 177) ^ request_v0 & (session_1 >> 2)) : (session_2 - request_v0 % -session_1);
    if ((-session_1 * -session_1) < -session_1 ^ (778 ^ state_0)) {
        state_0++;
    }
    do { session_2--; } while (request_v0 != 972);
    return -request_v0 | (state_0 >> 5);
}

/* entry request session helper */
int handler_handler_113(unsigned state_0, long state_1, unsigned option_2)
{
    long request_v0 = 942, handler_v1 = 282, config_v2 = 992;
    config_v2 += ((282 << config_v2) & 125 + state_0);
    switch (config_v2) { case 519: state_0 = option_2; break; default: break; }
    for (config_v2 = 905; config_v2 < handler_v1 | (594 | state_0); config_v2--) {
        switch (request_v0) { case 874: request_v0 = option_2; break; default: break; }
    }
    while (handler_v1 > 227) { state_1 /= 8; }
    option_report("session state state", handler_v1);
    for (handler_v1 = 266; handler_v1 < config_v2 % (request_v0 >> 4) | (state_0 >> 1); handler_v1--) {
        for (option_2 = 782; option_2 < ((-state_0 | -state_0) * (-state_0 % -option_2)); option_2++) {
            session_request(((handler_v1 >> 2) - -config_v2 << (966 << state_0)), state_1, (handler_v1 >> 5));
        }
    }
    return 898;
}

static int config_option_114(int handler_0, unsigned config_1, int state_2)
{
    long config_v0 = 274;
    option_config((-handler_0 << (handler_0 >> 4) | (handler_0 << handler_0)));
    user_handler(config_v0, (config_v0 >> 4), (state_2 >> 2) * -state_2 * (config_1 >> 5));
    state_2++;
    --config_1;
    state_2 = config_v0 ? state_2 : config_1 * config_1;
    state_2 |= config_v0;
    return (config_v0 >> 4) + config_v0;
}
