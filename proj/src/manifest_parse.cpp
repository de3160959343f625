#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "stackctl/errors.hpp"
#include "stackctl/manifest.hpp"

namespace stackctl {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= value.size()) {
        size_t comma = value.find(',', pos);
        std::string_view item =
            trim(value.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
        if (!item.empty())
            out.emplace_back(item);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

[[noreturn]] void fail(int line, size_t col, const std::string& msg) {
    throw_syntax("line " + std::to_string(line) + ", col " + std::to_string(col + 1) + ": " + msg);
}

double parse_number(std::string_view value, int line, size_t col) {
    try {
        size_t used = 0;
        double d = std::stod(std::string(value), &used);
        if (used != value.size())
            fail(line, col, "trailing characters after number '" + std::string(value) + "'");
        return d;
    } catch (const error&) {
        throw;
    } catch (const std::exception&) {
        fail(line, col, "malformed number '" + std::string(value) + "'");
    }
}

const char* const kKnownArgs[] = {"R_VERSION", "BUILD_DATE", "RSTUDIO_VERSION",
                                  "PANDOC_TEMPLATES_VERSION"};

bool known_arg(std::string_view name) {
    return std::find(std::begin(kKnownArgs), std::end(kKnownArgs), name) != std::end(kKnownArgs);
}

PolicyKind parse_policy_kind(std::string_view s, int line, size_t col) {
    if (s == "nightly")
        return PolicyKind::Nightly;
    if (s == "weekly")
        return PolicyKind::Weekly;
    if (s == "monthly")
        return PolicyKind::Monthly;
    if (s == "on-upstream-change")
        return PolicyKind::OnUpstreamChange;
    fail(line, col, "unknown policy kind '" + std::string(s) + "'");
}

TagKind parse_policy_tag_kind(std::string_view s, int line, size_t col) {
    if (s == "latest")
        return TagKind::Latest;
    if (s == "devel")
        return TagKind::Devel;
    if (s == "testing")
        return TagKind::Testing;
    if (s == "exact")
        return TagKind::Exact;
    fail(line, col, "unknown tag kind '" + std::string(s) + "' in policy (expected latest, devel, testing or exact)");
}

struct Parser {
    StackManifest m;
    std::filesystem::path base_dir;
    enum class Section { None, Stack, Calendar, Eras, Availability, Image } section = Section::None;
    ImageSpec* current = nullptr;
    bool saw_calendar_epoch = false;

    void open_section(std::string_view name, int line, size_t col) {
        current = nullptr;
        if (name == "stack") {
            section = Section::Stack;
        } else if (name == "calendar") {
            section = Section::Calendar;
        } else if (name == "eras") {
            section = Section::Eras;
        } else if (name == "availability") {
            section = Section::Availability;
        } else if (name.substr(0, 6) == "image ") {
            std::string_view image_name = trim(name.substr(6));
            if (image_name.empty())
                fail(line, col, "missing image name in section header");
            if (std::any_of(m.images.begin(), m.images.end(),
                            [&](const ImageSpec& i) { return i.name == image_name; }))
                throw_domain("line " + std::to_string(line) + ": duplicate image name '" +
                             std::string(image_name) + "'");
            section = Section::Image;
            m.images.emplace_back();
            current = &m.images.back();
            current->name = std::string(image_name);
        } else {
            fail(line, col, "unknown section '[" + std::string(name) + "]'");
        }
    }

    void key_value(std::string_view key, std::string_view value, int line, size_t kcol, size_t vcol) {
        switch (section) {
        case Section::None:
            fail(line, kcol, "key '" + std::string(key) + "' outside any section");
        case Section::Stack: stack_key(key, value, line, kcol); break;
        case Section::Calendar: calendar_key(key, value, line, kcol, vcol); break;
        case Section::Eras:
            m.os_eras.push_back(OsEra{parse_versionish(key, line, kcol), std::string(value)});
            if (value.empty())
                fail(line, vcol, "missing codename for era " + std::string(key));
            break;
        case Section::Availability: {
            Version v = parse_versionish(key, line, kcol);
            auto names = split_list(value);
            m.availability[v] = std::set<std::string>(names.begin(), names.end());
            break;
        }
        case Section::Image: image_key(key, value, line, kcol, vcol); break;
        }
    }

    Version parse_versionish(std::string_view s, int line, size_t col) {
        try {
            return parse_version(s);
        } catch (const error& e) {
            fail(line, col, e.what());
        }
    }

    Date parse_dateish(std::string_view s, int line, size_t col) {
        try {
            return parse_date(s);
        } catch (const error& e) {
            fail(line, col, e.what());
        }
    }

    void stack_key(std::string_view key, std::string_view value, int line, size_t kcol) {
        if (key == "name")
            m.stack_name = std::string(value);
        else if (key == "namespace")
            m.name_space = std::string(value);
        else if (key == "channels")
            m.channels = split_list(value);
        else
            fail(line, kcol, "unknown [stack] key '" + std::string(key) + "'");
    }

    void calendar_key(std::string_view key, std::string_view value, int line, size_t kcol, size_t vcol) {
        if (key == "epoch") {
            m.calendar.epoch = parse_dateish(value, line, vcol);
            saw_calendar_epoch = true;
        } else if (key == "include") {
            std::filesystem::path p = base_dir / std::string(value);
            try {
                m.calendar = load_calendar_entries(p, std::move(m.calendar));
            } catch (const error& e) {
                if (e.code() == errc::io)
                    throw_io("line " + std::to_string(line) + ": " + e.what());
                throw;
            }
        } else {
            m.calendar.entries.push_back(
                CalendarEntry{parse_versionish(key, line, kcol), parse_dateish(value, line, vcol)});
        }
    }

    void image_key(std::string_view key, std::string_view value, int line, size_t kcol, size_t vcol) {
        ImageSpec& img = *current;
        if (key == "description") {
            img.description = std::string(value);
        } else if (key == "parent") {
            if (value.empty()) {
                img.parent.reset();
                return;
            }
            ParentRef ref;
            size_t colon = value.find(':');
            if (colon == std::string_view::npos) {
                ref.name = std::string(value);
            } else {
                ref.name = std::string(trim(value.substr(0, colon)));
                try {
                    ref.pinned_tag = parse_tag(trim(value.substr(colon + 1)));
                } catch (const error& e) {
                    fail(line, vcol, e.what());
                }
            }
            if (ref.name.empty())
                fail(line, vcol, "missing parent image name");
            img.parent = std::move(ref);
        } else if (key == "base_os") {
            if (value == "inherited" || value.empty())
                img.base_os.reset();
            else
                img.base_os = std::string(value);
        } else if (key == "namespace") {
            img.name_space = std::string(value);
        } else if (key == "system_packages") {
            for (const auto& item : split_list(value)) {
                size_t at = item.find('@');
                if (at == std::string::npos)
                    img.system_packages.push_back(SystemPackage{item, ""});
                else
                    img.system_packages.push_back(
                        SystemPackage{item.substr(0, at), item.substr(at + 1)});
            }
        } else if (key == "r_packages") {
            img.r_packages = split_list(value);
        } else if (key == "build_args") {
            for (const auto& item : split_list(value)) {
                DeclaredArg arg;
                size_t eq = item.find('=');
                if (eq == std::string::npos) {
                    arg.name = item;
                } else {
                    arg.name = std::string(trim(std::string_view(item).substr(0, eq)));
                    arg.pinned_default = std::string(trim(std::string_view(item).substr(eq + 1)));
                }
                if (!known_arg(arg.name))
                    fail(line, vcol, "unknown build argument '" + arg.name + "'");
                img.build_args.push_back(std::move(arg));
            }
        } else if (key == "services") {
            for (const auto& item : split_list(value)) {
                size_t colon = item.find(':');
                if (colon == std::string::npos)
                    fail(line, vcol, "service '" + item + "' must be name:port");
                ServiceSpec svc;
                svc.name = std::string(trim(std::string_view(item).substr(0, colon)));
                std::string_view port = trim(std::string_view(item).substr(colon + 1));
                double p = parse_number(port, line, vcol);
                if (p < 0 || p != static_cast<double>(static_cast<unsigned>(p)))
                    fail(line, vcol, "malformed service port '" + std::string(port) + "'");
                svc.port = static_cast<unsigned>(p);
                img.services.push_back(std::move(svc));
            }
        } else if (key == "size_mb") {
            img.compressed_size_mb = parse_number(value, line, vcol);
        } else if (key == "downloads") {
            img.downloads = static_cast<long long>(parse_number(value, line, vcol));
        } else if (key == "policy") {
            size_t colon = value.find(':');
            if (colon == std::string_view::npos)
                fail(line, vcol, "policy must be '<kind>: <tag kinds>'");
            BuildPolicy policy;
            policy.kind = parse_policy_kind(trim(value.substr(0, colon)), line, vcol);
            for (const auto& item : split_list(value.substr(colon + 1)))
                policy.applies_to.insert(parse_policy_tag_kind(item, line, vcol));
            if (policy.applies_to.empty())
                fail(line, vcol, "policy lists no tag kinds");
            img.policies.push_back(std::move(policy));
        } else if (key.substr(0, 6) == "label.") {
            std::string_view label = key.substr(6);
            if (label == "license")
                img.labels.license = std::string(value);
            else if (label == "vcs-url")
                img.labels.vcs_url = std::string(value);
            else if (label == "vendor")
                img.labels.vendor = std::string(value);
            else if (label.empty())
                fail(line, kcol, "missing label key");
            else
                img.labels.extra[std::string(label)] = std::string(value);
        } else {
            fail(line, kcol, "unknown image key '" + std::string(key) + "'");
        }
    }
};

// Walks parent edges from every image, reporting the first inheritance
// cycle as "a -> b -> ... -> a".
void check_parent_edges(const StackManifest& m) {
    std::map<std::string, int> state;  // 0 unvisited, 1 in progress, 2 done
    for (const auto& img : m.images) {
        if (state[img.name] == 2)
            continue;
        std::vector<const ImageSpec*> path;
        const ImageSpec* cur = &img;
        while (true) {
            if (state[cur->name] == 1) {
                std::string msg = "inheritance cycle: ";
                auto it = std::find_if(path.begin(), path.end(),
                                       [&](const ImageSpec* i) { return i == cur; });
                for (; it != path.end(); ++it)
                    msg += (*it)->name + " -> ";
                msg += cur->name;
                throw_domain(msg);
            }
            if (state[cur->name] == 2)
                break;
            state[cur->name] = 1;
            path.push_back(cur);
            if (!cur->parent)
                break;
            const ImageSpec* next = m.find_image(cur->parent->name);
            if (!next)
                throw_domain("image '" + cur->name + "' references unknown parent '" +
                             cur->parent->name + "'");
            cur = next;
        }
        for (const ImageSpec* i : path)
            state[i->name] = 2;
    }
}

}  // namespace

StackManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    Parser parser;
    parser.base_dir = base_dir;

    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        std::string_view body = trim(raw);
        if (body.empty() || body.front() == '#')
            continue;
        size_t indent = static_cast<size_t>(body.data() - raw.data());
        if (body.front() == '[') {
            if (body.back() != ']')
                fail(line_no, indent, "unterminated section header");
            parser.open_section(trim(body.substr(1, body.size() - 2)), line_no, indent);
            continue;
        }
        size_t eq = body.find('=');
        if (eq == std::string_view::npos)
            fail(line_no, indent, "expected 'key = value' or a section header");
        std::string_view key = trim(body.substr(0, eq));
        std::string_view value = trim(body.substr(eq + 1));
        if (key.empty())
            fail(line_no, indent, "missing key before '='");
        size_t vcol = value.empty() ? indent + eq + 1
                                    : static_cast<size_t>(value.data() - raw.data());
        parser.key_value(key, value, line_no, indent, vcol);
    }

    check_parent_edges(parser.m);
    return parser.m;
}

StackManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw_io("cannot open manifest '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_manifest(buf.str(), path.has_parent_path() ? path.parent_path() : ".");
    } catch (const error& e) {
        throw error(e.code(), path.string() + ": " + e.what());
    }
}

SnapshotCalendar load_calendar_entries(const std::filesystem::path& path, SnapshotCalendar into) {
    std::ifstream in(path);
    if (!in)
        throw_io("cannot open calendar '" + path.string() + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = trim(line);
        if (body.empty() || body.front() == '#')
            continue;
        size_t tab = body.find('\t');
        if (tab == std::string_view::npos)
            throw_syntax(path.string() + ":" + std::to_string(line_no) +
                         ": expected 'version<TAB>date'");
        try {
            into.entries.push_back(CalendarEntry{parse_version(trim(body.substr(0, tab))),
                                                 parse_date(trim(body.substr(tab + 1)))});
        } catch (const error& e) {
            throw_syntax(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return into;
}

}  // namespace stackctl
