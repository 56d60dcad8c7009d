"""Fifty coefficient expressions covering every grammar production."""

EXPRESSIONS = [
    "1",
    "k",
    "k+1",
    "2*k+3",
    "k^2+3*k+4",
    "(k^2+3*k+4)*(1/2)",
    "(1/3)*(k+3)+(1/2)*(k+1)*(k+2)",
    "k^3+2*k^2+3*k+2",
    "(k+1)*(k+2)*(k+3)",
    "(k+1)^2",
    "(k+1)^2+1",
    "k^2-k+1",
    "k^2+2.9*k+2",
    "k^2+1.9*k+1",
    "0.5*k+0.25",
    "poch(3,1)",
    "poch(5/2,3/2)",
    "poch(4,2)",
    "poch(1.5,1)",
    "poch(2,3)",
    "poch(1,5/2)",
    "poch(3,2)+poch(2,2)",
    "poch(1,1)",
    "pow(2)",
    "pow(3/4)",
    "pow(1/2)",
    "pow(-1)",
    "pow(3/4)*(k^2+2*k+2)",
    "pow(1)+pow(3)",
    "pow(3/2)+pow(7/2)",
    "recip(k+1)",
    "recip(k^2+3*k+4)",
    "2*recip(k^2+3*k+4)",
    "recip(pow(2)+pow(3))",
    "recip(1+recip(k+1))",
    "recip(poch(3,2)+poch(5/2,2))",
    "poch(1,1)*recip(poch(3,1)+poch(2,1))",
    "prefix(1,2,4;3)",
    "prefix(1,2,4;k+1)",
    "prefix(1,1/2;poch(2,3))",
    "prefix(5;pow(2))",
    "3*(k+1)",
    "(k+1)*(k+1)*(k+1)",
    "(k+2)^3-(k+1)^3",
    "k+1+k+1",
    "(2/3)*pow(2)+(1/3)*pow(1)",
    "recip(recip(k+1)+recip(k+2))",
    "  k  +  1  ",
    "(((k+1)))",
    "1+k+k^2+k^3+k^4",
]

assert len(EXPRESSIONS) == 50
