#include <gmpxx.h>
#include <charconv>
#include <cstdio>
#include <string>
int main() {
    mpq_class q(1, 3);
    q += mpq_class(832040, 1346269);
    mpq_class d;
    mpq_set_d(d.get_mpq_t(), 0.1);
    char buf[64];
    auto r = std::to_chars(buf, buf + 64, 0.30000000000000004, std::chars_format::general);
    *r.ptr = 0;
    std::printf("%s %s %s\n", q.get_str().c_str(), d.get_str().c_str(), buf);
}
