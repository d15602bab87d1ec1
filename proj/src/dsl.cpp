#include "cbd/dsl.hpp"

#include <cstddef>
#include <optional>
#include <utility>

#include "cbd/errors.hpp"
#include "cbd/rational.hpp"

namespace cbd {

namespace {

struct Token {
    enum class Kind { Word, Quoted, LBrace, RBrace, Colon, Comma, End };
    Kind kind;
    std::string text;
    std::size_t column;  // 1-based
};

bool is_space(char c) { return c == ' ' || c == '\t'; }

bool is_punct(char c) { return c == '{' || c == '}' || c == ':' || c == ','; }

std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (is_space(line[i])) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        std::size_t column = i + 1;
        if (line[i] == '"') {
            std::size_t end = line.find('"', i + 1);
            if (end == std::string_view::npos)
                throw ParseError("unterminated quoted string", line_no, column);
            tokens.push_back(
                {Token::Kind::Quoted, std::string(line.substr(i + 1, end - i - 1)), column});
            i = end + 1;
            continue;
        }
        if (is_punct(line[i])) {
            Token::Kind kind = line[i] == '{'   ? Token::Kind::LBrace
                               : line[i] == '}' ? Token::Kind::RBrace
                               : line[i] == ':' ? Token::Kind::Colon
                                                : Token::Kind::Comma;
            tokens.push_back({kind, std::string(1, line[i]), column});
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !is_space(line[i]) && !is_punct(line[i]) && line[i] != '#' &&
               line[i] != '"')
            ++i;
        tokens.push_back({Token::Kind::Word, std::string(line.substr(start, i - start)), column});
    }
    tokens.push_back({Token::Kind::End, "", line.size() + 1});
    return tokens;
}

// Cursor over one line's tokens; all errors carry the line and the column
// of the offending token.
class Cursor {
public:
    Cursor(std::vector<Token> tokens, std::size_t line)
        : tokens_(std::move(tokens)), line_(line) {}

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_ + 1 < tokens_.size() ? pos_++ : pos_]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    std::size_t line() const { return line_; }

    Token expect_word(const std::string& what) {
        const Token& token = peek();
        if (token.kind != Token::Kind::Word)
            throw ParseError("expected " + what, line_, token.column);
        return next();
    }

    void expect(Token::Kind kind, const std::string& what) {
        const Token& token = peek();
        if (token.kind != kind) throw ParseError("expected " + what, line_, token.column);
        next();
    }

    void expect_end() {
        if (!at_end())
            throw ParseError("unexpected trailing input", line_, peek().column);
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    }
    return lines;
}

void parse_pmf_block(Cursor& cursor, const Context& context, ContextPMF& pmf) {
    const Token open = cursor.peek();
    cursor.expect(Token::Kind::LBrace, "'{'");
    Rational sum = 0;
    bool closed = false;
    while (!closed) {
        Token outcome_token = cursor.expect_word("an outcome string");
        OutcomeTuple outcome;
        try {
            outcome = OutcomeTuple::from_string(outcome_token.text);
        } catch (const Error&) {
            throw ParseError("outcome must be a string over '+'/'-'", cursor.line(),
                             outcome_token.column);
        }
        if (outcome.arity() != context.measured.size())
            throw ParseError("outcome '" + outcome_token.text + "' has " +
                                 std::to_string(outcome.arity()) + " signs, context '" +
                                 context.label + "' measures " +
                                 std::to_string(context.measured.size()),
                             cursor.line(), outcome_token.column);
        if (pmf.entries.count(outcome) != 0)
            throw ParseError("duplicate outcome '" + outcome_token.text + "' in context '" +
                                 context.label + "'",
                             cursor.line(), outcome_token.column);
        cursor.expect(Token::Kind::Colon, "':'");
        Token value_token = cursor.expect_word("a rational literal");
        std::optional<Rational> value = parse_rational(value_token.text);
        if (!value)
            throw ParseError("invalid rational literal '" + value_token.text + "'",
                             cursor.line(), value_token.column);
        if (*value < 0)
            throw ParseError("probability must be nonnegative", cursor.line(),
                             value_token.column);
        pmf.entries.emplace(std::move(outcome), *value);
        sum += *value;

        const Token& delimiter = cursor.peek();
        if (delimiter.kind == Token::Kind::Comma) {
            cursor.next();
        } else if (delimiter.kind == Token::Kind::RBrace) {
            cursor.next();
            closed = true;
        } else {
            throw ParseError("expected ',' or '}'", cursor.line(), delimiter.column);
        }
    }
    if (sum != 1)
        throw ParseError("PMF for context '" + context.label + "' sums to " + to_string(sum) +
                             ", expected 1",
                         cursor.line(), open.column);
}

System parse_document(std::string_view text, bool require_pmf) {
    System system;
    bool saw_declaration = false;

    std::vector<std::string_view> lines = split_lines(text);
    for (std::size_t line_no = 1; line_no <= lines.size(); ++line_no) {
        Cursor cursor(tokenize(lines[line_no - 1], line_no), line_no);
        if (cursor.at_end()) continue;

        Token keyword = cursor.expect_word("'system', 'contents', or 'context'");
        if (keyword.text == "system") {
            if (saw_declaration || !system.name.empty())
                throw ParseError("system line must be the first declaration", line_no,
                                 keyword.column);
            const Token& name = cursor.peek();
            if (name.kind != Token::Kind::Quoted)
                throw ParseError("expected a quoted system name", line_no, name.column);
            if (name.text.empty())
                throw ParseError("system name must be nonempty", line_no, name.column);
            system.name = name.text;
            cursor.next();
            cursor.expect_end();
            continue;
        }
        saw_declaration = true;

        if (keyword.text == "contents") {
            if (cursor.at_end())
                throw ParseError("expected at least one content label", line_no,
                                 cursor.peek().column);
            while (!cursor.at_end()) {
                Token label = cursor.expect_word("a content label");
                if (system.has_content(label.text))
                    throw ParseError("duplicate content '" + label.text + "'", line_no,
                                     label.column);
                system.contents.push_back({label.text});
            }
            continue;
        }

        if (keyword.text == "context") {
            Token label = cursor.expect_word("a context label");
            if (system.find_context(label.text) != nullptr)
                throw ParseError("duplicate context '" + label.text + "'", line_no,
                                 label.column);
            Token measures = cursor.expect_word("'measures'");
            if (measures.text != "measures")
                throw ParseError("expected 'measures'", line_no, measures.column);

            Context context{label.text, {}};
            while (cursor.peek().kind == Token::Kind::Word) {
                Token content = cursor.next();
                if (!system.has_content(content.text))
                    throw ParseError("unknown content '" + content.text + "'", line_no,
                                     content.column);
                for (const auto& seen : context.measured) {
                    if (seen == content.text)
                        throw ParseError("content '" + content.text +
                                             "' measured twice in context '" + label.text + "'",
                                         line_no, content.column);
                }
                context.measured.push_back(content.text);
            }
            if (context.measured.empty())
                throw ParseError("context must measure at least one content", line_no,
                                 cursor.peek().column);

            if (cursor.at_end() && !require_pmf) {
                system.contexts.push_back(std::move(context));
                continue;
            }
            ContextPMF pmf;
            parse_pmf_block(cursor, context, pmf);
            cursor.expect_end();
            system.pmfs.emplace(context.label, std::move(pmf));
            system.contexts.push_back(std::move(context));
            continue;
        }

        throw ParseError("expected 'system', 'contents', or 'context'", line_no,
                         keyword.column);
    }
    return system;
}

}  // namespace

System parse(std::string_view text) {
    System system = parse_document(text, /*require_pmf=*/true);
    ValidationReport report = validate(system);
    if (!report.ok())  // grammar checks above should make this unreachable
        throw ParseError(report.violations.front().message, 1, 1);
    return system;
}

SystemFormat parse_format(std::string_view text) {
    return parse_document(text, /*require_pmf=*/false).format();
}

std::string serialize(const System& system) {
    std::string out;
    if (!system.name.empty()) out += "system \"" + system.name + "\"\n";
    if (!system.contents.empty()) {
        out += "contents";
        for (const auto& content : system.contents) out += " " + content.label;
        out += "\n";
    }
    for (const auto& context : system.contexts) {
        out += "context " + context.label + " measures";
        for (const auto& measured : context.measured) out += " " + measured;
        out += " {";
        const ContextPMF& pmf = system.pmfs.at(context.label);
        bool first = true;
        for (const auto& [outcome, probability] : pmf.entries) {
            if (probability == 0) continue;
            out += first ? " " : ", ";
            out += outcome.str() + ": " + to_string(probability);
            first = false;
        }
        out += first ? "}\n" : " }\n";
    }
    return out;
}

std::vector<TrialRecord> parse_trials_csv(std::string_view text, const SystemFormat& format) {
    struct Cell {
        std::string text;
        std::size_t column;
    };
    auto split_row = [](std::string_view line) {
        std::vector<Cell> cells;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t end = line.find(',', start);
            if (end == std::string_view::npos) end = line.size();
            std::size_t a = start, b = end;
            while (a < b && is_space(line[a])) ++a;
            while (b > a && is_space(line[b - 1])) --b;
            cells.push_back({std::string(line.substr(a, b - a)), a + 1});
            if (end == line.size()) break;
            start = end + 1;
        }
        return cells;
    };

    std::vector<std::string_view> lines = split_lines(text);
    std::size_t line_no = 0;
    std::vector<Cell> header;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        header = split_row(lines[i]);
        line_no = i + 1;
        break;
    }
    if (header.empty()) throw ParseError("missing header row", 1, 1);
    if (header[0].text != "context")
        throw ParseError("header must start with 'context'", line_no, header[0].column);
    if (header.size() - 1 != format.contents.size())
        throw ParseError("header has " + std::to_string(header.size() - 1) +
                             " content columns, format declares " +
                             std::to_string(format.contents.size()),
                         line_no, header[0].column);
    for (std::size_t k = 0; k < format.contents.size(); ++k) {
        if (header[k + 1].text != format.contents[k].label)
            throw ParseError("header column is '" + header[k + 1].text + "', expected '" +
                                 format.contents[k].label + "'",
                             line_no, header[k + 1].column);
    }

    std::vector<TrialRecord> records;
    for (std::size_t i = line_no; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        std::size_t row_no = i + 1;
        std::vector<Cell> cells = split_row(lines[i]);
        if (cells.size() != header.size())
            throw ParseError("row has " + std::to_string(cells.size()) + " cells, expected " +
                                 std::to_string(header.size()),
                             row_no, 1);
        const Context* context = format.find_context(cells[0].text);
        if (context == nullptr)
            throw ParseError("unknown context '" + cells[0].text + "'", row_no,
                             cells[0].column);

        std::map<std::string, Sign> values;
        for (std::size_t k = 0; k < format.contents.size(); ++k) {
            const Cell& cell = cells[k + 1];
            const std::string& label = format.contents[k].label;
            bool measured = false;
            for (const auto& m : context->measured) measured = measured || m == label;
            if (!measured) {
                if (!cell.text.empty())
                    throw ParseError("value for content '" + label +
                                         "' not measured in context '" + context->label + "'",
                                     row_no, cell.column);
                continue;
            }
            if (cell.text == "+1")
                values[label] = +1;
            else if (cell.text == "-1")
                values[label] = -1;
            else
                throw ParseError("cell for measured content '" + label + "' must be +1 or -1",
                                 row_no, cell.column);
        }

        std::vector<Sign> ordered;
        ordered.reserve(context->measured.size());
        for (const auto& m : context->measured) ordered.push_back(values.at(m));
        records.push_back({context->label, OutcomeTuple(std::move(ordered))});
    }
    return records;
}

}  // namespace cbd
