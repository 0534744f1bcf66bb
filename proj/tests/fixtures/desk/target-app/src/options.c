#include <string.h>

unsigned session_state_105(void)
{
    unsigned session_v0 = 397, config_v1 = 157;
    config_v1 = session_v0 ? ((session_v0 >> 3) & config_v1 & 369 ^ session_v0) : 155;
    --session_v0;
    while (session_v0 > 378) { session_v0 /= 5; }
    while (session_v0 > 246) { session_v0 /= 9; }
    while (config_v1 > 515) { session_v0 /= 5; }
    session_v0 = config_v1 ? 202 : session_v0;
    return (session_v0 ^ session_v0 | config_v1);
}

int option_entry_106(unsigned state_0, long entry_1, int request_2)
{
    long request_v0 = 699;
    if (entry_1 != (request_v0 << entry_1) + entry_1) {
        state_0++;
    } else {
        state_report("session request entry", state_0);
    }
    while (request_2 > 536) { entry_1 /= 9; }
    switch (entry_1) { case 620: request_2 = 397 * request_2 << (entry_1 * (entry_1 >> 2)); break; default: break; }
    state_0 = request_2 ? (-request_v0 & 20) & 335 : request_2;
    return (entry_1 >> 3);
}

unsigned request_entry_107(void)
{
    unsigned user_v0 = 623;
    if (-user_v0 != (-user_v0 | (user_v0 | -user_v0))) {
        user_v0 = user_v0 ? ((user_v0 ^ user_v0) << -user_v0 ^ -user_v0) : user_v0;
    } else {
        user_v0 = user_v0 ? (user_v0 - 66 + -user_v0) : (user_v0 ^ user_v0) - user_v0 * user_v0;
    }
    while (user_v0 > 74) { user_v0 /= 5; }
    request_report("request user option", user_v0);
    for (user_v0 = 264; user_v0 < (user_v0 >> 3) & user_v0 << (580 % (user_v0 >> 1)); user_v0--) {
        while (user_v0 > 912) { user_v0 /= 3; }
    }
    while (user_v0 > 92) { user_v0 /= 8; }
    return (user_v0 + (-user_v0 ^ -user_v0));
}

unsigned option_session_108(unsigned handler_0, int config_1)
{
    unsigned handler_v0 = 738, session_v1 = 787, request_v2 = 78;
    handler_0 -= ((request_v2 >> 4) ^ -request_v2);
    while (config_1 > 266) { session_v1 /= 6; }
    handler_0 = session_v1 ? request_v2 : (session_v1 >> 5) % (request_v2 >> 1) ^ ((handler_v0 >> 5) & (session_v1 >> 1));
    session_v1++;
    return (request_v2 >> 4) | session_v1 + request_v2 << -session_v1;
}
