package com.example.web;

import org.springframework.web.bind.annotation.*;

@RestController
@RequestMapping("/users")
public class UserController {
    private final UserService service;
    private static final Logger log = LoggerFactory.getLogger(UserController.class);

    public UserController(UserService service) {
        this.service = service;
    }

    @PostMapping
    public UserDto create(@RequestBody CreateUserRequest request) {
        String email = request.getEmail();
        log.info("creating user {}", email);
        return service.register(request.getUsername(), email);
    }
}
