#include "math_utils.h"

int add(int a, int b) {
    return a + b;
}

int multiply(int a, int b) {
    return a * b;
}

int factorial(int n) {
    int result = 1;
    for (int i = 1; i <= n; i++) {
        result = multiply(result, i);
    }
    return result;
}
