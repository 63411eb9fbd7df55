#include <stdio.h>
#include "math_utils.h"

int main(void) {
    int x = 5;
    int y = 3;
    int sum = add(x, y);
    int product = multiply(x, y);
    int fact = factorial(x);

    printf("Sum: %d\n", sum);
    printf("Product: %d\n", product);
    printf("Factorial: %d\n", fact);
    return 0;
}
