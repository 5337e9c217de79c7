// format.cpp - skp-lite parsing, validation, normalization, and emission.

#include "muskia/format.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "muskia/raster.hpp"

namespace muskia {

using nlohmann::json;

std::string FormatError::format_message(Kind kind, const std::string& where,
                                        const std::string& reason, int index) {
    std::ostringstream os;
    switch (kind) {
    case Kind::Schema:
        os << "schema error at " << where << ": " << reason;
        break;
    case Kind::Invariant:
        os << "invariant error at command " << index << ": " << reason;
        break;
    case Kind::Unbalanced:
        os << "unbalanced program at command " << index << ": " << reason;
        break;
    }
    return os.str();
}

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& reason) {
    throw FormatError(FormatError::Kind::Schema, where, reason);
}

[[noreturn]] void invariant_fail(int index, const std::string& reason) {
    throw FormatError(FormatError::Kind::Invariant, "", reason, index);
}

double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) schema_fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema_fail(where, "expected a finite number");
    return v;
}

const json& get_field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) schema_fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_fail(where + "/" + key, "missing field");
    return *it;
}

Point get_point(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) schema_fail(where, "expected [x, y]");
    return Point{get_number(j[0], where + "/0"), get_number(j[1], where + "/1")};
}

// Colors are unpremultiplied in documents: every channel in [0, 1].
Color parse_color(const json& j, const std::string& where, int index) {
    const double a = get_number(get_field(j, "a", where), where + "/a");
    const double r = get_number(get_field(j, "r", where), where + "/r");
    const double g = get_number(get_field(j, "g", where), where + "/g");
    const double b = get_number(get_field(j, "b", where), where + "/b");
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(a) || !in01(r) || !in01(g) || !in01(b))
        invariant_fail(index, "color channel outside [0, 1] at " + where);
    Color c;
    c.a = a;
    c.r = a * r;
    c.g = a * g;
    c.b = a * b;
    return c;
}

// Unpremultiplies one channel so that reloading premultiplies back to `c`
// exactly. The straightforward quotient can land one ulp off the preimage of
// v -> round(a * v); nudge it until the round trip closes.
double unpremultiply_channel(double a, double c) {
    if (a <= 0.0) return 0.0;
    double u = c / a;
    u = std::min(std::max(u, 0.0), 1.0);
    if (a * u == c) return u;
    for (int dir = 0; dir < 2; ++dir) {
        double v = u;
        for (int step = 0; step < 4; ++step) {
            v = std::nextafter(v, dir == 0 ? 0.0 : 2.0);
            if (a * v == c && v >= 0.0 && v <= 1.0) return v;
        }
    }
    return u;
}

json color_to_json(const Color& c) {
    json j;
    j["a"] = c.a;
    j["r"] = unpremultiply_channel(c.a, c.r);
    j["g"] = unpremultiply_channel(c.a, c.g);
    j["b"] = unpremultiply_channel(c.a, c.b);
    return j;
}

std::vector<GradientStop> parse_stops(const json& j, const std::string& where,
                                      int index) {
    if (!j.is_array()) schema_fail(where, "expected an array of stops");
    if (j.empty()) invariant_fail(index, "gradient needs at least one stop");
    std::vector<GradientStop> stops;
    stops.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string sw = where + "/" + std::to_string(i);
        const json& sj = j[i];
        if (!sj.is_array() || sj.size() != 2) schema_fail(sw, "expected [offset, COLOR]");
        GradientStop s;
        s.offset = get_number(sj[0], sw + "/0");
        s.color = parse_color(sj[1], sw + "/1", index);
        stops.push_back(std::move(s));
    }
    // Normalize: clamp offsets into [0,1], then pad so the stops span 0..1.
    for (auto& s : stops) s.offset = std::min(std::max(s.offset, 0.0), 1.0);
    for (size_t i = 0; i + 1 < stops.size(); ++i)
        if (stops[i].offset > stops[i + 1].offset)
            invariant_fail(index, "gradient stop offsets must be non-decreasing");
    if (stops.front().offset > 0.0) {
        GradientStop pad = stops.front();
        pad.offset = 0.0;
        stops.insert(stops.begin(), pad);
    }
    if (stops.back().offset < 1.0) {
        GradientStop pad = stops.back();
        pad.offset = 1.0;
        stops.push_back(pad);
    }
    return stops;
}

Fill parse_fill(const json& j, const std::string& where, int index) {
    const json& type = get_field(j, "type", where);
    if (!type.is_string()) schema_fail(where + "/type", "expected a string");
    const std::string t = type.get<std::string>();
    if (t == "solid") {
        return Fill::solid(parse_color(get_field(j, "color", where), where + "/color", index));
    }
    if (t == "linearGradient") {
        const Point p0 = get_point(get_field(j, "p0", where), where + "/p0");
        const Point p1 = get_point(get_field(j, "p1", where), where + "/p1");
        if (p0 == p1) invariant_fail(index, "linear gradient endpoints coincide");
        auto stops = parse_stops(get_field(j, "stops", where), where + "/stops", index);
        return Fill::linear_gradient(p0, p1, std::move(stops));
    }
    if (t == "radialGradient") {
        const Point c = get_point(get_field(j, "center", where), where + "/center");
        const double r = get_number(get_field(j, "radius", where), where + "/radius");
        if (!(r > 0.0)) invariant_fail(index, "radial gradient radius must be positive");
        auto stops = parse_stops(get_field(j, "stops", where), where + "/stops", index);
        return Fill::radial_gradient(c, r, std::move(stops));
    }
    schema_fail(where + "/type", "unknown fill type '" + t + "'");
}

Shape parse_shape(const json& j, const std::string& where, int index) {
    const json& type = get_field(j, "type", where);
    if (!type.is_string()) schema_fail(where + "/type", "expected a string");
    const std::string t = type.get<std::string>();
    if (t == "rect") {
        const json& ltrb = get_field(j, "ltrb", where);
        if (!ltrb.is_array() || ltrb.size() != 4)
            schema_fail(where + "/ltrb", "expected [l, t, r, b]");
        const double l = get_number(ltrb[0], where + "/ltrb/0");
        const double tp = get_number(ltrb[1], where + "/ltrb/1");
        const double r = get_number(ltrb[2], where + "/ltrb/2");
        const double b = get_number(ltrb[3], where + "/ltrb/3");
        if (l > r || tp > b) invariant_fail(index, "rect with inverted edges");
        if (l == r || tp == b) return Shape::empty();  // zero area
        return Shape::rect(l, tp, r, b);
    }
    if (t == "circle") {
        const Point c = get_point(get_field(j, "center", where), where + "/center");
        const double r = get_number(get_field(j, "radius", where), where + "/radius");
        if (r < 0.0) invariant_fail(index, "circle with negative radius");
        if (r == 0.0) return Shape::empty();  // zero area
        return Shape::circle(c, r);
    }
    if (t == "full") return Shape::full();
    if (t == "empty") return Shape::empty();
    if (t == "intersect" || t == "union") {
        Shape lhs = parse_shape(get_field(j, "lhs", where), where + "/lhs", index);
        Shape rhs = parse_shape(get_field(j, "rhs", where), where + "/rhs", index);
        if (t == "intersect") return shape_intersect(lhs, rhs);
        return Shape::union_of(std::move(lhs), std::move(rhs));
    }
    schema_fail(where + "/type", "unknown shape type '" + t + "'");
}

Paint parse_paint(const json& j, const std::string& where, int index) {
    if (!j.is_object()) schema_fail(where, "expected a paint object");
    Paint p;  // defaults: solid opaque black, id, srcOver
    if (auto it = j.find("fill"); it != j.end())
        p.fill = parse_fill(*it, where + "/fill", index);
    if (auto it = j.find("filter"); it != j.end()) {
        if (!it->is_string()) schema_fail(where + "/filter", "expected a string");
        const std::string f = it->get<std::string>();
        if (f == "id") p.filter = ColorFilter::Id;
        else if (f == "luma") p.filter = ColorFilter::Luma;
        else schema_fail(where + "/filter", "unknown filter '" + f + "'");
    }
    if (auto it = j.find("blend"); it != j.end()) {
        if (!it->is_string()) schema_fail(where + "/blend", "expected a string");
        const std::string b = it->get<std::string>();
        if (b == "srcOver") p.blend = BlendMode::SrcOver;
        else if (b == "dstIn") p.blend = BlendMode::DstIn;
        else if (b == "multiply") p.blend = BlendMode::Multiply;
        else if (b == "srcOut") p.blend = BlendMode::SrcOut;
        else schema_fail(where + "/blend", "unknown blend '" + b + "'");
    }
    return p;
}

json fill_to_json(const Fill& f) {
    json j;
    switch (f.kind()) {
    case Fill::Kind::Solid:
        j["type"] = "solid";
        j["color"] = color_to_json(f.solid_color());
        break;
    case Fill::Kind::LinearGradient:
        j["type"] = "linearGradient";
        j["p0"] = {f.p0().x, f.p0().y};
        j["p1"] = {f.p1().x, f.p1().y};
        break;
    case Fill::Kind::RadialGradient:
        j["type"] = "radialGradient";
        j["center"] = {f.center().x, f.center().y};
        j["radius"] = f.radius();
        break;
    }
    if (f.is_gradient()) {
        json stops = json::array();
        for (const GradientStop& s : f.stops())
            stops.push_back({s.offset, color_to_json(s.color)});
        j["stops"] = std::move(stops);
    }
    return j;
}

json shape_to_json(const Shape& s) {
    json j;
    switch (s.kind()) {
    case ShapeKind::Rect:
        j["type"] = "rect";
        j["ltrb"] = {s.left(), s.top(), s.right(), s.bottom()};
        break;
    case ShapeKind::Circle:
        j["type"] = "circle";
        j["center"] = {s.center().x, s.center().y};
        j["radius"] = s.radius();
        break;
    case ShapeKind::Intersect:
    case ShapeKind::Union:
        j["type"] = s.kind() == ShapeKind::Intersect ? "intersect" : "union";
        j["lhs"] = shape_to_json(s.lhs());
        j["rhs"] = shape_to_json(s.rhs());
        break;
    case ShapeKind::Full:
        j["type"] = "full";
        break;
    case ShapeKind::Empty:
        j["type"] = "empty";
        break;
    }
    return j;
}

json paint_to_json(const Paint& p) {
    json j;
    j["fill"] = fill_to_json(p.fill);
    j["filter"] = color_filter_name(p.filter);
    j["blend"] = blend_mode_name(p.blend);
    return j;
}

}  // namespace

Command command_from_json(const json& j, const std::string& where) {
    const json& opj = get_field(j, "op", where);
    if (!opj.is_string()) schema_fail(where + "/op", "expected a string");
    const std::string op = opj.get<std::string>();
    // Command indices for invariant errors come from the path tail; the
    // caller passes "/commands/<i>".
    int index = -1;
    if (auto pos = where.rfind('/'); pos != std::string::npos) {
        try {
            index = std::stoi(where.substr(pos + 1));
        } catch (...) {
        }
    }
    if (op == "draw") {
        Shape s = parse_shape(get_field(j, "shape", where), where + "/shape", index);
        Paint p = parse_paint(get_field(j, "paint", where), where + "/paint", index);
        return Command::draw(std::move(s), std::move(p));
    }
    if (op == "clip")
        return Command::clip(parse_shape(get_field(j, "shape", where), where + "/shape", index));
    if (op == "save") return Command::save();
    if (op == "saveLayer")
        return Command::save_layer(parse_paint(get_field(j, "paint", where), where + "/paint", index));
    if (op == "restore") return Command::restore();
    if (op == "noop") return Command::noop();
    schema_fail(where + "/op", "unknown op '" + op + "'");
}

json command_to_json(const Command& c) {
    json j;
    j["op"] = op_name(c.op);
    switch (c.op) {
    case Command::Op::Draw:
        j["shape"] = shape_to_json(c.shape);
        j["paint"] = paint_to_json(c.paint);
        break;
    case Command::Op::Clip:
        j["shape"] = shape_to_json(c.shape);
        break;
    case Command::Op::SaveLayer:
        j["paint"] = paint_to_json(c.paint);
        break;
    default:
        break;
    }
    return j;
}

Program load_program(const json& doc) {
    if (!doc.is_object()) schema_fail("", "expected a top-level object");
    const json& version = get_field(doc, "version", "");
    if (!version.is_number_integer() || version.get<int>() != 1)
        schema_fail("/version", "unsupported version (expected 1)");
    const json& commands = get_field(doc, "commands", "");
    if (!commands.is_array()) schema_fail("/commands", "expected an array");

    Program p;
    p.commands.reserve(commands.size());
    for (size_t i = 0; i < commands.size(); ++i)
        p.commands.push_back(
            command_from_json(commands[i], "/commands/" + std::to_string(i)));

    if (auto err = check_balanced(p)) {
        throw FormatError(FormatError::Kind::Unbalanced, "",
                          err->kind == BalanceError::Kind::UnmatchedRestore
                              ? "restore without open save/saveLayer"
                              : "save/saveLayer never restored",
                          err->index);
    }
    return p;
}

Program load_program_text(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) schema_fail("", "invalid JSON");
    return load_program(doc);
}

Program load_program_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return load_program_text(ss.str());
}

namespace {

json save_impl(const Program& p, bool keep_noops) {
    json doc;
    doc["version"] = 1;
    json commands = json::array();
    for (const Command& c : p.commands) {
        if (c.op == Command::Op::NoOp && !keep_noops) continue;
        commands.push_back(command_to_json(c));
    }
    doc["commands"] = std::move(commands);
    return doc;
}

}  // namespace

json save_program(const Program& p) { return save_impl(p, false); }
json save_program_with_noops(const Program& p) { return save_impl(p, true); }

std::string save_program_text(const Program& p) { return save_program(p).dump(2); }

void save_program_file(const Program& p, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << save_program_text(p) << '\n';
    if (!os) throw IoError("write failed: " + path);
}

}  // namespace muskia
