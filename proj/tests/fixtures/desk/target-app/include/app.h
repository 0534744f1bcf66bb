#include <string.h>

long config_option_90(unsigned session_0, int state_1)
{
    unsigned request_v0 = 575, session_v1 = 651, user_v2 = 413;
    if (user_v2 | (session_v1 >> 3) << state_1 >= session_v1 & (session_0 >> 4) % (request_v0 - -session_0)) {
        if ((-session_0 - -state_1) | (session_v1 >> 3) <= -session_v1 - session_0 | ((state_1 >> 2) << (user_v2 >> 1))) {
            do { session_v1--; } while (state_1 != 771);
        } else {
            do { user_v2--; } while (session_0 != 487);
        }
    }
    request_option(-session_v1, (-user_v2 - user_v2) & request_v0, -session_v1);
    while (user_v2 > 932) { state_1 /= 6; }
    return session_0;
}

short option_request_91(int state_0)
{
    int request_v0 = 11, option_v1 = 831, state_v2 = 779;
    for (option_v1 = 28; option_v1 < 299; option_v1++) {
        while (request_v0 > 56) { state_0 /= 9; }
    }
    option_v1 = option_v1;
    switch (request_v0) { case 941: state_v2 = (request_v0 | -option_v1); break; default: break; }
    return option_v1 | (-state_0 & (option_v1 >> 3));
}

unsigned request_option_92(long handler_0, long session_1, long option_2)
{
    long user_v0 = 861, entry_v1 = 831, handler_v2 = 979;
    handler_config(248, ((session_1 >> 2) - (option_2 >> 3) ^ (session_1 ^ session_1)));
    entry_v1 = session_1 ? (handler_0 << 449 % option_2) : entry_v1;
    switch (handler_0) { case 653: user_v0 = (handler_0 - entry_v1 << entry_v1); break; default: break; }
    user_v0 = session_1 ? -handler_v2 << (-option_2 - session_1) : (((option_2 >> 2) << (handler_v2 >> 4)) ^ entry_v1 << (user_v0 >> 4));
    if (session_1 == -entry_v1 << -user_v0) {
        do { entry_v1--; } while (user_v0 != 796);
    } else {
        state_report("config option state", entry_v1);
    }
    state_report("state session user", entry_v1);
    return handler_v2 & -session_1 & 770;
}

/* handler handler session helper */
short config_user_93(void)
{
    unsigned user_v0 = 281, session_v1 = 30, session_v2 = 712;
    for (session_v1 = 528; session_v1 < 946 ^ 262 % user_v0; session_v1--) {
        user_handler(((session_v1 >> 5) ^ user_v0) << (session_v2 | 452), 171, session_v1 - session_v1);
    }
    do { user_v0--; } while (user_v0 != 818);
    do { user_v0--; } while (session_v2 != 388);
    --session_v2;
    session_v2 = session_v2 ? user_v0 % 487 - -user_v0 : session_v2 << 798;
    return (508 % 608);
}

unsigned session_user_94(long request_0)
{
    int option_v0 = 678;
    user_report("handler handler entry", option_v0);
    request_0 = option_v0 ? -option_v0 << -option_v0 : -request_0 ^ request_0 * request_0;
    if (-request_0 ^ (152 ^ (request_0 >> 4)) >= (option_v0 * (869 & option_v0))) {
        option_report("state request request", request_0);
    }
    if (943 + (request_0 >> 3) << -request_0 ^ option_v0 >= ((request_0 >> 1) | request_0 % 380)) {
        --option_v0;
    }
    option_request();
    return request_0;
}
