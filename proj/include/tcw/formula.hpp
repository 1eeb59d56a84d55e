#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tcw {

inline constexpr std::string_view kWildcard = "_";

// One binder (x, y-bar < a z): z must be caused by every x and concurrent with every y.
struct Binder {
    std::vector<std::string> causes;
    std::vector<std::string> concs;
    std::string label;
    std::string var;

    bool has_empty_deps() const { return causes.empty() && concs.empty(); }
    bool is_wildcard() const { return label == kWildcard; }
    friend bool operator==(const Binder&, const Binder&) = default;
};

enum class Op {
    Top,
    Bot,
    And,
    Or,
    Neg,
    Bind,         // (x, y < a z) phi
    DualBind,     // {x, y < a z} phi
    ExecBind,     // sugar: bind then run z
    DualExecBind, // sugar: dual bind then box z
    Step,         // step(B1, ..., Bn) phi
    ExecStep,     // step!(B1, ..., Bn) phi
    Exec,         // <z> phi
    DualExec,     // [z] phi
    Prop,         // X(x1, ..., xn)
    Mu,
    Nu,
};

class Formula {
  public:
    struct Node;

    Formula();

    static Formula top();
    static Formula bot();
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula neg(Formula a);
    static Formula bind(Binder b, Formula body);
    static Formula dual_bind(Binder b, Formula body);
    static Formula exec_bind(Binder b, Formula body);
    static Formula dual_exec_bind(Binder b, Formula body);
    static Formula step(std::vector<Binder> bs, Formula body);
    static Formula exec_step(std::vector<Binder> bs, Formula body);
    static Formula exec(std::string var, Formula body);
    static Formula dual_exec(std::string var, Formula body);
    static Formula prop(std::string name, std::vector<std::string> args);
    static Formula mu(std::string name, std::vector<std::string> params, Formula body);
    static Formula nu(std::string name, std::vector<std::string> params, Formula body);

    // Conjunction / disjunction of a list; empty gives T / F.
    static Formula conj_all(const std::vector<Formula>& fs);
    static Formula disj_all(const std::vector<Formula>& fs);

    Op op() const;
    const Formula& left() const;   // And, Or
    const Formula& right() const;  // And, Or
    const Formula& body() const;   // unary forms
    const Binder& binder() const;  // Bind family
    const std::vector<Binder>& steps() const;
    const std::string& name() const;               // Exec var, Prop/Mu/Nu name
    const std::vector<std::string>& vars() const;  // Prop args, Mu/Nu params

    bool is_binary() const { return op() == Op::And || op() == Op::Or; }
    bool is_binder_like() const;
    const Node* id() const { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);

  private:
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Formula::Node {
    Op op = Op::Top;
    std::vector<Formula> kids;
    Binder binder;
    std::vector<Binder> steps;
    std::string name;
    std::vector<std::string> vars;
};

// Free event variables in first-occurrence order.
std::vector<std::string> free_vars(const Formula& f);
// Free proposition names in first-occurrence order.
std::vector<std::string> free_props(const Formula& f);
bool is_closed(const Formula& f);
bool has_fixpoints(const Formula& f);
std::size_t formula_size(const Formula& f);

// Concrete syntax accepted back by parse_formula.
std::string to_string(const Formula& f);

// Parses and checks proposition arity, positivity and fixpoint free variables.
Formula parse_formula(std::string_view src);

// The checks parse_formula performs, for formulas built in code.
void validate_formula(const Formula& f);

} // namespace tcw
