#include "tcw/pes_text.hpp"

#include <fstream>
#include <sstream>

#include "lexer.hpp"

namespace tcw {

RawPes parse_pes_raw(std::string_view text)
{
    detail::Lexer lx(text);
    RawPes raw;
    if (!lx.at_ident("pes")) lx.fail("expected 'pes' but found " + lx.describe());
    lx.next();
    raw.name = lx.expect_ident("structure name");
    lx.expect_symbol('{');
    while (!lx.at_symbol('}')) {
        if (lx.at_end()) lx.fail("unterminated structure body");
        if (lx.at_ident("event")) {
            lx.next();
            Event e;
            e.name = lx.expect_ident("event id");
            lx.expect_symbol(':');
            e.label = lx.expect_ident("label");
            raw.events.push_back(std::move(e));
        } else {
            std::string a = lx.expect_ident("event id, 'event' or '}'");
            if (lx.at_symbol('<')) {
                lx.next();
                raw.causes.emplace_back(a, lx.expect_ident("event id"));
            } else if (lx.at_symbol('#')) {
                lx.next();
                raw.conflicts.emplace_back(a, lx.expect_ident("event id"));
            } else {
                lx.fail("expected '<' or '#' but found " + lx.describe());
            }
        }
        lx.expect_symbol(';');
    }
    lx.next();
    if (!lx.at_end()) lx.fail("trailing input after structure");
    return raw;
}

Pes parse_pes(std::string_view text) { return validate_pes(parse_pes_raw(text)); }

Pes load_pes_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_pes(ss.str());
}

std::string print_pes(const Pes& pes)
{
    std::ostringstream out;
    out << "pes " << (pes.name().empty() ? "P" : pes.name()) << " {\n";
    for (const auto& e : pes.events()) out << "  event " << e.name << " : " << e.label << ";\n";
    for (auto [a, b] : pes.immediate_causality())
        out << "  " << pes.event(a).name << " < " << pes.event(b).name << ";\n";
    for (auto [a, b] : pes.immediate_conflicts())
        out << "  " << pes.event(a).name << " # " << pes.event(b).name << ";\n";
    out << "}\n";
    return out.str();
}

} // namespace tcw
