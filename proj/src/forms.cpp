#include "curveorbit/forms.hpp"

namespace curveorbit {

Form normalized(const Form& f) {
    if (f.is_zero()) return f;
    return f.scaled(f.leading_coeff().inverse());
}

bool projectively_equal(const Form& a, const Form& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    return normalized(a) == normalized(b);
}

Form divide_exact(Form f, const Form& g) {
    if (g.is_zero()) throw DomainError("ZeroDivisor", "division by the zero form");
    const Mono3& lg = g.leading_monomial();
    ExactScalar inv = g.leading_coeff().inverse();
    Form q;
    while (!f.is_zero()) {
        Mono3 lf = f.leading_monomial();
        Mono3 m{lf[0] - lg[0], lf[1] - lg[1], lf[2] - lg[2]};
        if (m[0] < 0 || m[1] < 0 || m[2] < 0) throw DomainError("NotDivisible", "form is not divisible");
        Form t = Form::monomial(f.leading_coeff() * inv, m);
        q += t;
        f -= t * g;
    }
    return q;
}

Form hessian(const Form& f) {
    std::array<std::array<Form, 3>, 3> h;
    std::array<Form, 3> d{f.derivative(0), f.derivative(1), f.derivative(2)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) h[i][j] = d[i].derivative(j);
    return det3(h);
}

std::string to_string(const Form& f) {
    if (f.is_zero()) return "0";
    static const char* names[3] = {"x", "y", "z"};
    std::string out;
    for (const auto& [m, c] : f.terms()) {
        std::string mono;
        for (int k = 0; k < 3; ++k) {
            if (m[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += names[k];
            if (m[k] > 1) mono += "^" + std::to_string(m[k]);
        }
        std::string cs = c.to_string();
        bool compound = !c.is_rational() && c.terms().size() > 1;
        std::string term;
        if (mono.empty())
            term = compound ? "(" + cs + ")" : cs;
        else if (c.is_one())
            term = mono;
        else if ((-c).is_one())
            term = "-" + mono;
        else
            term = (compound ? "(" + cs + ")" : cs) + "*" + mono;
        if (!out.empty() && term[0] != '-') out += "+";
        out += term;
    }
    return out;
}

}  // namespace curveorbit
